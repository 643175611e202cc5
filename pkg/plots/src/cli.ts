#!/usr/bin/env node
/** CLI: read a cupgames result CSV, write an SVG chart. */

import { readFileSync, writeFileSync } from "node:fs";
import process from "node:process";

import { SchemaError } from "./csv.js";
import { RenderOptions, renderCsv } from "./render.js";

const USAGE = `usage: cupgames-plot --input results.csv --output chart.svg
                     [--log-x] [--log-y] [--series name1,name2]
                     [--width N] [--height N] [--title TEXT]`;

interface Args {
  input?: string;
  output?: string;
  options: RenderOptions;
}

function parseArgs(argv: string[]): Args {
  const args: Args = { options: {} };
  for (let i = 0; i < argv.length; i += 1) {
    const flag = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new Error(`${flag} needs a value`);
      return argv[i];
    };
    switch (flag) {
      case "--input":
        args.input = next();
        break;
      case "--output":
        args.output = next();
        break;
      case "--log-x":
        args.options.logX = true;
        break;
      case "--log-y":
        args.options.logY = true;
        break;
      case "--series":
        args.options.series = next().split(",").map((s) => s.trim());
        break;
      case "--width":
        args.options.width = Number(next());
        break;
      case "--height":
        args.options.height = Number(next());
        break;
      case "--title":
        args.options.title = next();
        break;
      case "--help":
        console.log(USAGE);
        process.exit(0);
        break;
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  return args;
}

export function main(argv: string[] = process.argv.slice(2)): number {
  let args: Args;
  try {
    args = parseArgs(argv);
    if (!args.input || !args.output) {
      throw new Error("--input and --output are required");
    }
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  try {
    const text = readFileSync(args.input, "utf-8");
    const svg = renderCsv(text, args.options);
    writeFileSync(args.output, svg, "utf-8");
    console.log(`wrote ${args.output}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 3;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main());
}
