/** CBOW word-embedding pretraining with negative sampling (window 5,
 * dimension 50) over the concatenated type and term token streams of a
 * dataset.  The resulting matrix initializes the network's embedding layer.
 */

import { Rng } from "./rng.js";
import { Example, Vocab } from "./dataset.js";

export interface CbowConfig {
  dim: number;
  window: number;
  negatives: number;
  epochs: number;
  lr: number;
}

export const DEFAULT_CBOW: CbowConfig = { dim: 50, window: 5, negatives: 5, epochs: 5, lr: 0.025 };

export function pretrainEmbeddings(
  examples: Example[],
  vocab: Vocab,
  seed = 0,
  config: CbowConfig = DEFAULT_CBOW
): Float64Array {
  if (vocab.size < 2) throw new Error("vocabulary too small for embedding pretraining");
  const { dim, window, negatives, epochs, lr } = config;
  const rng = new Rng(seed ^ 0x5eed);

  // one stream per example: type tokens, then term tokens
  const streams = examples.map((ex) =>
    [...ex.typeTokens, ...ex.termTokens].map((t) => vocab.encode(t))
  );

  // unigram table for negative sampling (frequency^0.75, standard practice)
  const freq = new Float64Array(vocab.size);
  for (const s of streams) for (const id of s) freq[id] += 1;
  const table: number[] = [];
  for (let id = 0; id < vocab.size; id++) {
    const n = Math.max(1, Math.round(Math.pow(freq[id], 0.75)));
    if (freq[id] > 0) for (let k = 0; k < n; k++) table.push(id);
  }
  if (table.length === 0) throw new Error("empty dataset");

  const input = new Float64Array(vocab.size * dim); // the embeddings we keep
  const output = new Float64Array(vocab.size * dim);
  for (let i = 0; i < input.length; i++) input[i] = (rng.next() - 0.5) / dim;

  const ctxSum = new Float64Array(dim);
  const ctxGrad = new Float64Array(dim);
  for (let epoch = 0; epoch < epochs; epoch++) {
    for (const stream of streams) {
      for (let pos = 0; pos < stream.length; pos++) {
        const center = stream[pos];
        const lo = Math.max(0, pos - window);
        const hi = Math.min(stream.length - 1, pos + window);
        let nCtx = 0;
        ctxSum.fill(0);
        for (let p = lo; p <= hi; p++) {
          if (p === pos) continue;
          const row = stream[p] * dim;
          for (let d = 0; d < dim; d++) ctxSum[d] += input[row + d];
          nCtx++;
        }
        if (nCtx === 0) continue;
        for (let d = 0; d < dim; d++) ctxSum[d] /= nCtx;
        ctxGrad.fill(0);
        for (let k = 0; k <= negatives; k++) {
          const positive = k === 0;
          const target = positive ? center : table[rng.int(table.length)];
          if (!positive && target === center) continue;
          const row = target * dim;
          let dot = 0;
          for (let d = 0; d < dim; d++) dot += ctxSum[d] * output[row + d];
          const pred = 1 / (1 + Math.exp(-dot));
          const err = (positive ? 1 : 0) - pred;
          for (let d = 0; d < dim; d++) {
            ctxGrad[d] += lr * err * output[row + d];
            output[row + d] += lr * err * ctxSum[d];
          }
        }
        for (let p = lo; p <= hi; p++) {
          if (p === pos) continue;
          const row = stream[p] * dim;
          for (let d = 0; d < dim; d++) input[row + d] += ctxGrad[d] / nCtx;
        }
      }
    }
  }
  return input;
}
