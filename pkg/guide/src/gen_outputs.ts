/** Batch-decode a test set into an outputs file for `proofsynth eval`.
 *
 * Usage: node dist/gen_outputs.js --model model.json --testset test.jsonl --out outputs.txt
 *
 * The test set is a dataset JSONL (only type_tokens is read) or plain lines
 * of space-joined type tokens; the output file has one decoded token line
 * per case (NONE when the model emits nothing).
 */

import * as fs from "node:fs";

import { Seq2Seq } from "./model.js";

export function readTypes(path: string): string[][] {
  const out: string[][] = [];
  for (const line of fs.readFileSync(path, "utf-8").split("\n")) {
    const trimmed = line.trim();
    if (!trimmed) continue;
    if (trimmed.startsWith("{")) {
      const row = JSON.parse(trimmed);
      if (row.type_tokens === undefined) continue; // header
      out.push(String(row.type_tokens).split(/\s+/));
    } else {
      out.push(trimmed.split(/\s+/));
    }
  }
  return out;
}

export function main(argv: string[]): number {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) args.set(argv[i].replace(/^--/, ""), argv[i + 1] ?? "");
  const modelPath = args.get("model");
  const testsetPath = args.get("testset");
  const outPath = args.get("out");
  if (!modelPath || !testsetPath || !outPath) {
    console.error("usage: gen-outputs --model model.json --testset test.jsonl --out outputs.txt");
    return 2;
  }
  const model = Seq2Seq.load(fs.readFileSync(modelPath, "utf-8"));
  const lines = readTypes(testsetPath).map((tokens) => {
    const out = model.decode(tokens);
    return out.length > 0 ? out.join(" ") : "NONE";
  });
  fs.writeFileSync(outPath, lines.join("\n") + "\n");
  console.error(`decoded ${lines.length} cases to ${outPath}`);
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("gen_outputs.js")) {
  process.exit(main(process.argv.slice(2)));
}
