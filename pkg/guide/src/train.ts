/** Training loop and CLI.
 *
 * Usage:
 *   node dist/train.js --data train.jsonl --out model.json
 *        [--epochs 3000] [--batch 32] [--seed 0] [--init paper|conventional]
 *        [--log losses.csv] [--log-every 1]
 *
 * The loss is the summed cross entropy over each output sequence, averaged
 * per batch; one Adam update per batch.  A non-finite loss aborts with a
 * diagnostic.  The per-epoch loss curve goes to stderr (and to --log).
 */

import * as fs from "node:fs";

import { Adam, DEFAULT_ADAM } from "./adam.js";
import { pretrainEmbeddings } from "./cbow.js";
import { readDataset, Example, Vocab } from "./dataset.js";
import { DEFAULT_CONFIG, ModelConfig, Seq2Seq } from "./model.js";
import { Rng } from "./rng.js";

export interface TrainOptions {
  epochs: number;
  batchSize: number;
  seed: number;
  initScale: ModelConfig["initScale"];
  logEvery: number;
  onEpoch?: (epoch: number, loss: number) => void;
}

export const DEFAULT_TRAIN: TrainOptions = {
  epochs: 3000,
  batchSize: 32,
  seed: 0,
  initScale: "paper",
  logEvery: 1,
};

export interface TrainResult {
  model: Seq2Seq;
  losses: number[]; // mean per-sequence loss per epoch
}

export function train(examples: Example[], options: Partial<TrainOptions> = {}): TrainResult {
  const opt = { ...DEFAULT_TRAIN, ...options };
  const vocab = Vocab.fromExamples(examples);
  const embed = pretrainEmbeddings(examples, vocab, opt.seed);
  const config: ModelConfig = { ...DEFAULT_CONFIG, initScale: opt.initScale };
  const model = new Seq2Seq(vocab, config, opt.seed, embed);
  const optimizer = new Adam(model.params(), DEFAULT_ADAM);
  const rng = new Rng(opt.seed + 1);

  const encoded = examples.map((ex) => ({
    input: ex.typeTokens.map((t) => vocab.encode(t)),
    target: ex.termTokens.map((t) => vocab.encode(t)),
  }));
  const order = encoded.map((_, i) => i);
  const grads = model.params().map((p) => new Float64Array(p.data.length));
  const losses: number[] = [];

  for (let epoch = 0; epoch < opt.epochs; epoch++) {
    rng.shuffle(order);
    let epochLoss = 0;
    for (let start = 0; start < order.length; start += opt.batchSize) {
      const batch = order.slice(start, start + opt.batchSize);
      for (const g of grads) g.fill(0);
      let batchLoss = 0;
      for (const idx of batch) {
        const { input, target } = encoded[idx];
        batchLoss += model.lossAndGrads(input, target, grads);
      }
      if (!Number.isFinite(batchLoss)) {
        throw new Error(
          `non-finite loss at epoch ${epoch}, batch starting at ${start}: ${batchLoss}`
        );
      }
      for (const g of grads) {
        for (let i = 0; i < g.length; i++) g[i] /= batch.length;
      }
      optimizer.step(grads);
      epochLoss += batchLoss;
    }
    const mean = epochLoss / encoded.length;
    losses.push(mean);
    if (opt.onEpoch && epoch % opt.logEvery === 0) opt.onEpoch(epoch, mean);
  }
  return { model, losses };
}

// ---------------------------------------------------------------------------

function parseArgs(argv: string[]): Map<string, string> {
  const out = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    if (!argv[i].startsWith("--")) throw new Error(`unexpected argument ${argv[i]}`);
    const key = argv[i].slice(2);
    out.set(key, argv[i + 1] ?? "");
    i++;
  }
  return out;
}

export function main(argv: string[]): number {
  const args = parseArgs(argv);
  const dataPath = args.get("data");
  const outPath = args.get("out");
  if (!dataPath || !outPath) {
    console.error("usage: train --data train.jsonl --out model.json [--epochs N] [--batch N] [--seed N] [--init paper|conventional] [--log losses.csv]");
    return 2;
  }
  const { examples } = readDataset(dataPath);
  const logPath = args.get("log");
  const logLines: string[] = ["epoch,loss"];
  const started = Date.now();
  try {
    const { model, losses } = train(examples, {
      epochs: args.has("epochs") ? Number(args.get("epochs")) : DEFAULT_TRAIN.epochs,
      batchSize: args.has("batch") ? Number(args.get("batch")) : DEFAULT_TRAIN.batchSize,
      seed: args.has("seed") ? Number(args.get("seed")) : DEFAULT_TRAIN.seed,
      initScale: (args.get("init") as ModelConfig["initScale"]) ?? "paper",
      logEvery: args.has("log-every") ? Number(args.get("log-every")) : 1,
      onEpoch: (epoch, loss) => {
        console.error(`epoch ${epoch}: loss ${loss.toFixed(4)}`);
        logLines.push(`${epoch},${loss}`);
      },
    });
    fs.writeFileSync(outPath, model.save());
    if (logPath) fs.writeFileSync(logPath, logLines.join("\n") + "\n");
    console.error(
      `trained on ${examples.length} pairs, final loss ${losses[losses.length - 1].toFixed(4)}, ` +
        `${((Date.now() - started) / 1000).toFixed(0)}s; saved to ${outPath}`
    );
    return 0;
  } catch (e) {
    console.error(`error: ${e instanceof Error ? e.message : e}`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("train.js")) {
  process.exit(main(process.argv.slice(2)));
}
