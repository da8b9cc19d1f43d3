#!/usr/bin/env node
/**
 * Command line entry point.
 *
 * Exit codes mirror the Python CLI: 0 success, 2 usage error, 3 missing
 * input file, 4 invalid input content (schema mismatch, malformed CSV).
 */
import * as fs from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { SchemaError } from "./csv";
import { FIGURE_KINDS, FigureKind } from "./figures";
import { renderFile } from "./render";

export function main(argv: string[]): number {
  let usageError = false;
  const parser = yargs(argv)
    .scriptName("mslab-plots")
    .command("render", "render one figure from an experiment CSV", (y) =>
      y
        .option("kind", {
          choices: FIGURE_KINDS,
          demandOption: true,
          describe: "figure kind",
        })
        .option("in", {
          type: "string",
          demandOption: true,
          describe: "input CSV path",
        })
        .option("out", {
          type: "string",
          demandOption: true,
          describe: "output SVG path",
        })
        .option("width", { type: "number", default: 900 })
        .option("height", { type: "number", default: 520 })
        .option("title", { type: "string" }),
    )
    .demandCommand(1, "a command is required")
    .strict()
    .exitProcess(false)
    .fail((msg, err) => {
      usageError = true;
      process.stderr.write(`error: ${msg ?? err?.message}\n`);
    });

  const args = parser.parseSync();
  if (usageError) return 2;
  if (args._[0] !== "render") {
    process.stderr.write(`error: unknown command ${String(args._[0])}\n`);
    return 2;
  }

  const input = args.in as string;
  const output = args.out as string;
  if (!fs.existsSync(input)) {
    process.stderr.write(`error: input file not found: ${input}\n`);
    return 3;
  }
  try {
    renderFile({
      kind: args.kind as FigureKind,
      input,
      output,
      width: args.width as number,
      height: args.height as number,
      title: args.title as string | undefined,
    });
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 4;
    }
    throw err;
  }
  process.stdout.write(`wrote ${output}\n`);
  return 0;
}

if (require.main === module) {
  process.exit(main(hideBin(process.argv)));
}
