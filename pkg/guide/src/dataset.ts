/** Reading the proofsynth JSONL dataset files and building the vocabulary.
 *
 * The file's first line is a header object; every other line carries
 * `type_tokens` and `term_tokens` as space-joined canonical token strings.
 * The model's token inventory is the dataset vocabulary plus <EOS>, with one
 * reserved <UNK> row for out-of-vocabulary tokens at inference time.
 */

import * as fs from "node:fs";

export const EOS = "<EOS>";
export const UNK = "<UNK>";

export interface Example {
  typeTokens: string[];
  termTokens: string[];
}

export interface Dataset {
  header: Record<string, unknown>;
  examples: Example[];
}

export function readDataset(path: string): Dataset {
  const lines = fs
    .readFileSync(path, "utf-8")
    .split("\n")
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  const examples: Example[] = [];
  let header: Record<string, unknown> = {};
  lines.forEach((line, i) => {
    const row = JSON.parse(line);
    if (i === 0 && row.version !== undefined && row.type_tokens === undefined) {
      header = row;
      return;
    }
    examples.push({
      typeTokens: String(row.type_tokens).split(/\s+/),
      termTokens: String(row.term_tokens).split(/\s+/),
    });
  });
  return { header, examples };
}

export class Vocab {
  readonly tokens: string[];
  readonly index: Map<string, number>;
  readonly eosId: number;
  readonly unkId: number;

  constructor(tokens: string[]) {
    this.tokens = tokens;
    this.index = new Map(tokens.map((t, i) => [t, i]));
    this.eosId = this.index.get(EOS)!;
    this.unkId = this.index.get(UNK)!;
  }

  get size(): number {
    return this.tokens.length;
  }

  encode(token: string): number {
    return this.index.get(token) ?? this.unkId;
  }

  decode(id: number): string {
    return this.tokens[id];
  }

  static fromExamples(examples: Example[]): Vocab {
    const seen = new Set<string>();
    for (const ex of examples) {
      for (const t of ex.typeTokens) seen.add(t);
      for (const t of ex.termTokens) seen.add(t);
    }
    if (seen.size < 2) {
      throw new Error(`dataset vocabulary too small (${seen.size} tokens)`);
    }
    return new Vocab([...[...seen].sort(), EOS, UNK]);
  }
}
