/**
 * Thin bindings over the glmshapley command line interface.
 *
 * All computation happens in the core; these functions assemble the
 * argument list, run the CLI with a temporary JSON output path, and
 * return the parsed document. Numbers are therefore identical to what
 * any other consumer of the CLI's JSON sees.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import type {
  AnalyzeOptions,
  PlayerSpec,
  ReportDocument,
  RootogramData,
  RootogramOptions,
} from "./types.js";

export * from "./types.js";

/** Raised when the CLI exits nonzero; carries its exit code and stderr. */
export class GlmShapleyCliError extends Error {
  constructor(
    readonly exitCode: number,
    readonly stderr: string,
    args: string[],
  ) {
    super(
      `glmshapley exited with code ${exitCode} ` +
        `(${stderr.trim() || "no diagnostics"}) [args: ${args.join(" ")}]`,
    );
    this.name = "GlmShapleyCliError";
  }
}

export function formatPlayers(players: PlayerSpec[]): string {
  if (players.length === 0) throw new Error("players must be non-empty");
  return players
    .map((p) =>
      typeof p === "string" ? p : `${p.name}=${p.columns.join("+")}`,
    )
    .join(",");
}

function runCli(bin: string | undefined, args: string[]): unknown {
  const dir = mkdtempSync(join(tmpdir(), "glmshapley-"));
  const out = join(dir, "out.json");
  try {
    const result = spawnSync(bin ?? process.env.GLMSHAPLEY_BIN ?? "glmshapley", [
      ...args,
      "--out",
      out,
    ], { encoding: "utf8" });
    if (result.error) throw result.error;
    if (result.status !== 0) {
      throw new GlmShapleyCliError(result.status ?? -1, result.stderr, args);
    }
    return JSON.parse(readFileSync(out, "utf8"));
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

function commonArgs(opts: AnalyzeOptions | RootogramOptions): string[] {
  const args = [
    "--data", opts.data,
    "--response", opts.response,
    "--players", formatPlayers(opts.players),
  ];
  if ("hurdle" in opts && opts.hurdle) args.push("--hurdle");
  else if (opts.family) args.push("--family", opts.family);
  if (opts.delimiter) args.push("--delimiter", opts.delimiter);
  if (opts.workers !== undefined) args.push("--workers", String(opts.workers));
  if (opts.seed !== undefined) args.push("--seed", String(opts.seed));
  return args;
}

/** Shapley decomposition of one family's fit over all regressor subsets. */
export function analyze(opts: AnalyzeOptions): ReportDocument {
  const args = ["analyze", ...commonArgs(opts)];
  if (opts.measures?.length) args.push("--measure", opts.measures.join(","));
  if (opts.nullMode) args.push("--null", opts.nullMode);
  if (opts.mcSamples !== undefined) {
    args.push("--mc-samples", String(opts.mcSamples));
  }
  return runCli(opts.bin, args) as ReportDocument;
}

/** Two-part hurdle decomposition (logit + zero-truncated poisson). */
export function analyzeHurdle(
  opts: Omit<AnalyzeOptions, "family" | "hurdle">,
): ReportDocument {
  return analyze({ ...opts, hurdle: true });
}

/** Hanging-rootogram data of the full model. */
export function rootogram(opts: RootogramOptions): RootogramData {
  const args = ["rootogram", ...commonArgs(opts)];
  if (opts.jMax !== undefined) args.push("--jmax", String(opts.jMax));
  return runCli(opts.bin, args) as RootogramData;
}
