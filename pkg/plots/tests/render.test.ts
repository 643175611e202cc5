import { readFileSync } from "node:fs";
import { join, dirname } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { SchemaError, parseResultCsv } from "../src/csv.js";
import { renderCsv, renderCurveCsv, renderSweepCsv } from "../src/render.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "..", "fixtures");

function fixture(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf-8");
}

/** Tiny well-formedness check: every opened tag closes, in order. */
function assertParseableXml(text: string): void {
  const stack: string[] = [];
  const tagRe = /<\/?([a-zA-Z][\w:-]*)((?:"[^"]*"|[^<>"])*?)(\/?)>/g;
  let match: RegExpExecArray | null;
  let sawAny = false;
  while ((match = tagRe.exec(text)) !== null) {
    sawAny = true;
    const [whole, name, , selfClosed] = match;
    if (whole.startsWith("<?")) continue;
    if (whole.startsWith("</")) {
      expect(stack.pop()).toBe(name);
    } else if (!selfClosed) {
      stack.push(name);
    }
  }
  expect(sawAny).toBe(true);
  expect(stack).toEqual([]);
}

describe("curve rendering", () => {
  it("renders both series from the curve CSV", () => {
    const svg = renderCurveCsv(fixture("curve.csv"));
    assertParseableXml(svg);
    expect(svg).toContain("<svg");
    const polylines = svg.match(/<polyline/g) ?? [];
    expect(polylines.length).toBe(2);
    expect(svg).toContain("b(t) bound");
    expect(svg).toContain("measured");
  });

  it("is a pure consumer: same bytes, same chart", () => {
    const text = fixture("curve.csv");
    expect(renderCurveCsv(text)).toBe(renderCurveCsv(text));
  });

  it("supports log axes and series selection", () => {
    const svg = renderCurveCsv(fixture("curve.csv"), {
      logX: true,
      logY: true,
      series: ["b(t) bound"],
    });
    assertParseableXml(svg);
    expect((svg.match(/<polyline/g) ?? []).length).toBe(1);
  });

  it("rejects a schema mismatch, naming the expected version", () => {
    expect(() => renderCurveCsv(fixture("bad-schema.csv"))).toThrowError(
      /cupgames-curve-v1/
    );
  });

  it("rejects an empty CSV", () => {
    expect(() => renderCurveCsv(fixture("empty.csv"))).toThrowError(SchemaError);
  });
});

describe("sweep rendering", () => {
  it("renders rounds with the embedded reference line", () => {
    const svg = renderSweepCsv(fixture("sweep.csv"));
    assertParseableXml(svg);
    expect(svg).toContain("rounds used");
    expect(svg).toContain("t(b) reference");
  });

  it("dispatches on the schema marker", () => {
    const svg = renderCsv(fixture("sweep.csv"));
    expect(svg).toContain("rounds used");
    const svg2 = renderCsv(fixture("curve.csv"));
    expect(svg2).toContain("b(t) bound");
  });
});

describe("csv parsing", () => {
  it("reads comments, header and rows", () => {
    const table = parseResultCsv(fixture("curve.csv"));
    expect(table.schema).toBe("cupgames-curve-v1");
    expect(table.header).toContain("measured_backlog");
    expect(table.rows.length).toBeGreaterThan(0);
  });

  it("requires a schema marker", () => {
    expect(() => parseResultCsv("a,b\n1,2\n")).toThrowError(SchemaError);
  });
});
