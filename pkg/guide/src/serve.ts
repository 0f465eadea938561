/** Guide-protocol server: answers `GUESS <type tokens>` lines on stdin with
 * `TERM <term tokens>` (or `NONE`) on stdout, one reply per request, in
 * order.  Malformed requests get `NONE` and a log line on stderr.
 *
 * Usage: node dist/serve.js model.json
 */

import * as fs from "node:fs";
import * as readline from "node:readline";

import { Seq2Seq } from "./model.js";

export function respond(model: Seq2Seq, line: string): string {
  const trimmed = line.trim();
  if (trimmed !== "GUESS" && !trimmed.startsWith("GUESS ")) {
    return "";
  }
  const tokens = trimmed.slice("GUESS".length).trim().split(/\s+/).filter((t) => t.length > 0);
  if (tokens.length === 0) return "NONE";
  const out = model.decode(tokens);
  return out.length > 0 ? `TERM ${out.join(" ")}` : "NONE";
}

export function main(argv: string[]): number {
  if (argv.length !== 1) {
    console.error("usage: serve model.json");
    return 2;
  }
  const model = Seq2Seq.load(fs.readFileSync(argv[0], "utf-8"));
  const rl = readline.createInterface({ input: process.stdin, terminal: false });
  rl.on("line", (line) => {
    const reply = respond(model, line);
    if (reply === "") {
      console.error(`malformed request: ${JSON.stringify(line)}`);
      process.stdout.write("NONE\n");
      return;
    }
    process.stdout.write(reply + "\n");
  });
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("serve.js")) {
  main(process.argv.slice(2));
}
