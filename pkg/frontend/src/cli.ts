#!/usr/bin/env node
import * as fs from "node:fs";
import * as path from "node:path";

import yargs from "yargs";

import { DataError, SchemaError } from "./errors";
import { KINDS, RenderOptions } from "./kinds";

function kindList(): string {
  return Object.entries(KINDS)
    .map(([name, def]) => `  ${name.padEnd(17)} ${def.summary}`)
    .join("\n");
}

export function buildParser() {
  return yargs()
    .scriptName("pseudospec-plot")
    .usage("$0 <kind> --in <csv...> --out <img>")
    .command("$0 <kind>", "render one figure from CSV inputs", (cmd) =>
      cmd
        .positional("kind", {
          describe: "figure kind",
          type: "string",
          choices: Object.keys(KINDS),
        })
        .option("in", {
          describe: "input CSV file(s)",
          type: "string",
          array: true,
          demandOption: true,
        })
        .option("out", {
          describe: "output image path (SVG)",
          type: "string",
          demandOption: true,
        })
        .option("norm", {
          describe: "error column plotted by the errors kind",
          choices: ["l_inf", "l_1"] as const,
          default: "l_inf" as const,
        })
        .option("columns", {
          describe: "comma-separated column list for the diagnostics kind",
          type: "string",
        })
        .option("title", { describe: "override the default title", type: "string" })
        .option("width", { describe: "image width in px", type: "number", default: 720 })
        .option("height", { describe: "image height in px", type: "number", default: 480 }),
    )
    .check((parsed) => {
      for (const key of ["width", "height"] as const) {
        const value = parsed[key] as number | undefined;
        if (value !== undefined && (!Number.isFinite(value) || value <= 0)) {
          throw new Error(`--${key} must be a positive number`);
        }
      }
      return true;
    })
    .epilogue(`Figure kinds:\n${kindList()}`)
    .strict()
    .help()
    .version(false)
    .exitProcess(false)
    .fail(false);
}

/**
 * Run the CLI; returns the process exit code.
 *
 * 0 success, 1 usage or data problems, 2 CSV schema mismatch.
 */
export async function main(argv: string[]): Promise<number> {
  let args: Record<string, unknown>;
  try {
    args = (await buildParser().parse(argv)) as Record<string, unknown>;
  } catch (exc) {
    console.error(`usage error: ${(exc as Error).message}`);
    console.error("run with --help for the kind list");
    return 1;
  }
  const kind = args["kind"] as string | undefined;
  if (kind === undefined) {
    // --help path: yargs already printed the text
    return 0;
  }
  const columns = args["columns"] as string | undefined;
  const options: RenderOptions = {
    norm: args["norm"] as "l_inf" | "l_1",
    columns: columns?.split(",").map((c) => c.trim()).filter((c) => c !== ""),
    title: args["title"] as string | undefined,
    width: args["width"] as number,
    height: args["height"] as number,
  };
  const out = args["out"] as string;
  try {
    const def = KINDS[kind];
    if (def === undefined) {
      throw new DataError(`unknown kind ${kind}`);
    }
    const svg = def.render(args["in"] as string[], options);
    fs.mkdirSync(path.dirname(path.resolve(out)), { recursive: true });
    fs.writeFileSync(out, `${svg}\n`);
    console.log(out);
    return 0;
  } catch (exc) {
    if (exc instanceof SchemaError) {
      console.error(`schema error: ${exc.message}`);
      return 2;
    }
    if (exc instanceof DataError) {
      console.error(`error: ${exc.message}`);
      return 1;
    }
    console.error(`error: ${(exc as Error).message}`);
    return 1;
  }
}

if (require.main === module) {
  void main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
