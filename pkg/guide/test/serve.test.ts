import { spawn } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { describe, expect, it } from "vitest";

import { Example, Vocab } from "../src/dataset.js";
import { readDataset } from "../src/dataset.js";
import { DEFAULT_CONFIG, Seq2Seq } from "../src/model.js";
import { respond } from "../src/serve.js";
import { readTypes } from "../src/gen_outputs.js";

const EXAMPLES: Example[] = [
  { typeTokens: ["a", "→", "a"], termTokens: ["(", "λ", "x0", ".", "x0", ")"] },
  { typeTokens: ["b", "→", "b"], termTokens: ["(", "λ", "x0", ".", "x0", ")"] },
];

function freshModel(): Seq2Seq {
  return new Seq2Seq(Vocab.fromExamples(EXAMPLES), DEFAULT_CONFIG, 4);
}

describe("respond", () => {
  const model = freshModel();

  it("answers GUESS with TERM tokens or NONE", () => {
    const reply = respond(model, "GUESS a → a");
    expect(reply === "NONE" || reply.startsWith("TERM ")).toBe(true);
  });

  it("flags malformed requests; empty guesses answer NONE", () => {
    expect(respond(model, "HELLO there")).toBe("");
    expect(respond(model, "GUESS")).toBe("NONE");
    expect(respond(model, "GUESS   ")).toBe("NONE");
  });

  it("is deterministic per checkpoint", () => {
    expect(respond(model, "GUESS a → a")).toBe(respond(model, "GUESS a → a"));
  });
});

describe("dataset reading", () => {
  it("parses header and entries, and extracts types for batch decoding", () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "guide-test-"));
    const p = path.join(dir, "d.jsonl");
    fs.writeFileSync(
      p,
      [
        '{"version": "proofsynth-dataset-1", "seed": 1, "normal_only": false}',
        '{"type_tokens": "a → a", "term_tokens": "( λ x0 . x0 )", "size": 2, "normal_only": false}',
        '{"type_tokens": "b → b", "term_tokens": "( λ x0 . x0 )", "size": 2, "normal_only": false}',
      ].join("\n")
    );
    const { header, examples } = readDataset(p);
    expect(header.seed).toBe(1);
    expect(examples.length).toBe(2);
    expect(examples[0].typeTokens).toEqual(["a", "→", "a"]);
    expect(readTypes(p)).toEqual([
      ["a", "→", "a"],
      ["b", "→", "b"],
    ]);
    const vocab = Vocab.fromExamples(examples);
    expect(vocab.tokens).toContain("<EOS>");
    expect(vocab.tokens).toContain("<UNK>");
  });
});

describe("server process", () => {
  it("speaks the wire protocol over stdio", async () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "guide-test-"));
    const checkpoint = path.join(dir, "model.json");
    fs.writeFileSync(checkpoint, freshModel().save());
    const serverPath = path.join(__dirname, "..", "dist", "serve.js");
    if (!fs.existsSync(serverPath)) {
      throw new Error("dist/serve.js missing; run `npm run build` before the tests");
    }
    const proc = spawn(process.execPath, [serverPath, checkpoint], {
      stdio: ["pipe", "pipe", "pipe"],
    });
    const replies: string[] = [];
    const done = new Promise<void>((resolve) => {
      let buf = "";
      proc.stdout.on("data", (chunk) => {
        buf += chunk.toString();
        let idx;
        while ((idx = buf.indexOf("\n")) >= 0) {
          replies.push(buf.slice(0, idx));
          buf = buf.slice(idx + 1);
        }
        if (replies.length >= 3) resolve();
      });
    });
    proc.stdin.write("GUESS a → a\n");
    proc.stdin.write("not a request\n");
    proc.stdin.write("GUESS b → b\n");
    await done;
    proc.kill();
    expect(replies.length).toBe(3);
    expect(replies[0] === "NONE" || replies[0].startsWith("TERM ")).toBe(true);
    expect(replies[1]).toBe("NONE"); // malformed requests answer NONE
    expect(replies[2] === "NONE" || replies[2].startsWith("TERM ")).toBe(true);
  }, 30_000);
});
