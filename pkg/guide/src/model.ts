/** The encoder-decoder network: token embedding, two LSTM layers and a
 * softmax projection, trained with summed cross entropy over the output
 * token sequence.
 *
 * The network is unrolled over [input tokens, <EOS>, output tokens]; the
 * step that consumes <EOS> predicts the first output token, and each output
 * token predicts its successor, the last one predicting <EOS>.  Decoding
 * feeds argmax tokens back until <EOS> or a length cap.  All state starts at
 * zero.  Everything is hand-rolled on Float64Array so runs are deterministic
 * and checkpoints round-trip exactly.
 */

import { Rng } from "./rng.js";
import { Vocab, EOS, UNK } from "./dataset.js";

export interface ModelConfig {
  embedDim: number; // 50
  hiddenDim: number; // 50; gives 4*(50*(50+50)+50) = 20,200 params per layer
  layers: number; // 2
  /** "paper" draws N(0, sqrt(50)) as published; "conventional" uses 1/sqrt(50). */
  initScale: "paper" | "conventional";
  maxDecodeLen: number; // 128
}

export const DEFAULT_CONFIG: ModelConfig = {
  embedDim: 50,
  hiddenDim: 50,
  layers: 2,
  initScale: "paper",
  maxDecodeLen: 128,
};

// ---------------------------------------------------------------------------
// Parameters

export interface Param {
  name: string;
  rows: number;
  cols: number; // cols = 1 for vectors
  data: Float64Array;
}

function param(name: string, rows: number, cols: number): Param {
  return { name, rows, cols, data: new Float64Array(rows * cols) };
}

function gaussInit(p: Param, rng: Rng, std: number): void {
  for (let i = 0; i < p.data.length; i++) p.data[i] = rng.gauss() * std;
}

interface LstmLayer {
  W: Param; // (4H x D) input weights, gate rows packed [i, f, o, g]
  U: Param; // (4H x H) recurrent weights
  b: Param; // (4H) biases
}

export class Seq2Seq {
  readonly config: ModelConfig;
  readonly vocab: Vocab;
  readonly embedding: Param; // (W x D)
  readonly lstm: LstmLayer[];
  readonly proj: Param; // (W x H)
  readonly projBias: Param; // (W)

  constructor(vocab: Vocab, config: ModelConfig, seed = 0, embedInit?: Float64Array) {
    this.config = config;
    this.vocab = vocab;
    const { embedDim: D, hiddenDim: H } = config;
    const W = vocab.size;
    const rng = new Rng(seed);
    const std = config.initScale === "paper" ? Math.sqrt(50) : 1 / Math.sqrt(50);

    this.embedding = param("embedding", W, D);
    if (embedInit) {
      if (embedInit.length !== W * D) throw new Error("embedding init has wrong shape");
      this.embedding.data.set(embedInit);
    } else {
      gaussInit(this.embedding, rng, 0.1);
    }
    this.lstm = [];
    for (let l = 0; l < config.layers; l++) {
      const layer = {
        W: param(`lstm${l}.W`, 4 * H, l === 0 ? D : H),
        U: param(`lstm${l}.U`, 4 * H, H),
        b: param(`lstm${l}.b`, 4 * H, 1),
      };
      gaussInit(layer.W, rng, std);
      gaussInit(layer.U, rng, std);
      this.lstm.push(layer);
    }
    this.proj = param("proj", W, H);
    this.projBias = param("projBias", W, 1);
    gaussInit(this.proj, rng, std);
  }

  params(): Param[] {
    const out = [this.embedding];
    for (const l of this.lstm) out.push(l.W, l.U, l.b);
    out.push(this.proj, this.projBias);
    return out;
  }

  /** Learnable parameter count per named layer (for the parameter audit). */
  parameterCounts(): Record<string, number> {
    const counts: Record<string, number> = {
      embedding: this.embedding.data.length,
      projection: this.proj.data.length + this.projBias.data.length,
    };
    this.lstm.forEach((l, i) => {
      counts[`lstm${i}`] = l.W.data.length + l.U.data.length + l.b.data.length;
    });
    return counts;
  }

  // -- forward ---------------------------------------------------------------

  /** One step for one layer; writes next h and c into the provided arrays and
   * returns the gate activations (needed for backprop). */
  private step(
    layer: LstmLayer,
    x: Float64Array,
    hPrev: Float64Array,
    cPrev: Float64Array,
    hOut: Float64Array,
    cOut: Float64Array
  ): { gates: Float64Array; tanhC: Float64Array } {
    const H = this.config.hiddenDim;
    const D = layer.W.cols;
    const gates = new Float64Array(4 * H);
    const { data: W } = layer.W;
    const { data: U } = layer.U;
    const { data: b } = layer.b;
    for (let r = 0; r < 4 * H; r++) {
      let acc = b[r];
      const wRow = r * D;
      for (let c = 0; c < D; c++) acc += W[wRow + c] * x[c];
      const uRow = r * H;
      for (let c = 0; c < H; c++) acc += U[uRow + c] * hPrev[c];
      gates[r] = acc;
    }
    const tanhC = new Float64Array(H);
    for (let j = 0; j < H; j++) {
      const i = sigmoid(gates[j]);
      const f = sigmoid(gates[H + j]);
      const o = sigmoid(gates[2 * H + j]);
      const g = Math.tanh(gates[3 * H + j]);
      gates[j] = i;
      gates[H + j] = f;
      gates[2 * H + j] = o;
      gates[3 * H + j] = g;
      const c = f * cPrev[j] + i * g;
      cOut[j] = c;
      const tc = Math.tanh(c);
      tanhC[j] = tc;
      hOut[j] = o * tc;
    }
    return { gates, tanhC };
  }

  private logits(h: Float64Array): Float64Array {
    const W = this.vocab.size;
    const H = this.config.hiddenDim;
    const out = new Float64Array(W);
    const { data: P } = this.proj;
    const { data: pb } = this.projBias;
    for (let r = 0; r < W; r++) {
      let acc = pb[r];
      const row = r * H;
      for (let c = 0; c < H; c++) acc += P[row + c] * h[c];
      out[r] = acc;
    }
    return out;
  }

  /** Greedy decode: feed the input sequence then <EOS>, then feed each argmax
   * token back until <EOS> or the length cap.  Unknown inputs use the
   * reserved <UNK> row.  Output never contains <EOS>. */
  decode(inputTokens: string[]): string[] {
    const { hiddenDim: H, layers, maxDecodeLen } = this.config;
    const h = Array.from({ length: layers }, () => new Float64Array(H));
    const c = Array.from({ length: layers }, () => new Float64Array(H));
    const feed = (tokenId: number): number => {
      let x: Float64Array = this.embedding.data.subarray(
        tokenId * this.config.embedDim,
        (tokenId + 1) * this.config.embedDim
      ) as Float64Array;
      for (let l = 0; l < layers; l++) {
        const hNext = new Float64Array(H);
        const cNext = new Float64Array(H);
        this.step(this.lstm[l], x, h[l], c[l], hNext, cNext);
        h[l] = hNext;
        c[l] = cNext;
        x = hNext;
      }
      return argmax(this.logits(h[layers - 1]));
    };
    for (const tok of inputTokens) feed(this.vocab.encode(tok));
    let next = feed(this.vocab.eosId);
    const out: string[] = [];
    while (next !== this.vocab.eosId && out.length < maxDecodeLen) {
      out.push(this.vocab.decode(next));
      next = feed(next);
    }
    return out;
  }

  // -- loss and gradients ------------------------------------------------------

  /** Summed softmax cross entropy over the output sequence of one example,
   * with teacher forcing; accumulates parameter gradients into grads (same
   * order as params()).  Returns the loss. */
  lossAndGrads(inputIds: number[], targetIds: number[], grads: Float64Array[]): number {
    const { embedDim: D, hiddenDim: H, layers } = this.config;
    const W = this.vocab.size;
    const eos = this.vocab.eosId;
    // the unrolled stream: inputs, then EOS, then all targets but each
    // target is also a prediction point; the last prediction is EOS itself
    const stream = [...inputIds, eos, ...targetIds];
    const T = stream.length;
    const nIn = inputIds.length; // positions >= nIn predict targets
    const predictAt = (t: number) => t >= nIn; // predicts stream[t+1] or EOS at the end
    const targetFor = (t: number) => (t + 1 < T ? stream[t + 1] : eos);

    // forward, caching everything
    const xs: Float64Array[] = [];
    const hs: Float64Array[][] = [];
    const cs: Float64Array[][] = [];
    const gateCache: { gates: Float64Array; tanhC: Float64Array }[][] = [];
    let hPrev: Float64Array[] = Array.from({ length: layers }, () => new Float64Array(H));
    let cPrev: Float64Array[] = Array.from({ length: layers }, () => new Float64Array(H));
    const probCache: Float64Array[] = [];
    let loss = 0;
    for (let t = 0; t < T; t++) {
      const x = this.embedding.data.slice(stream[t] * D, (stream[t] + 1) * D);
      xs.push(x);
      const hRow: Float64Array[] = [];
      const cRow: Float64Array[] = [];
      const gRow: { gates: Float64Array; tanhC: Float64Array }[] = [];
      let inp = x;
      for (let l = 0; l < layers; l++) {
        const hNext = new Float64Array(H);
        const cNext = new Float64Array(H);
        gRow.push(this.step(this.lstm[l], inp, hPrev[l], cPrev[l], hNext, cNext));
        hRow.push(hNext);
        cRow.push(cNext);
        inp = hNext;
      }
      hs.push(hRow);
      cs.push(cRow);
      gateCache.push(gRow);
      hPrev = hRow;
      cPrev = cRow;
      if (predictAt(t)) {
        const z = this.logits(hRow[layers - 1]);
        const p = softmax(z);
        probCache.push(p);
        loss += -Math.log(Math.max(p[targetFor(t)], 1e-300));
      } else {
        probCache.push(new Float64Array(0));
      }
    }

    // backward
    const [gEmb, ...rest] = grads;
    const gL: { W: Float64Array; U: Float64Array; b: Float64Array }[] = [];
    for (let l = 0; l < layers; l++) {
      gL.push({ W: rest[3 * l], U: rest[3 * l + 1], b: rest[3 * l + 2] });
    }
    const gProj = rest[3 * layers];
    const gProjBias = rest[3 * layers + 1];

    const dhNext = Array.from({ length: layers }, () => new Float64Array(H));
    const dcNext = Array.from({ length: layers }, () => new Float64Array(H));
    for (let t = T - 1; t >= 0; t--) {
      // dh of the top layer collects the projection gradient at prediction steps
      if (predictAt(t)) {
        const p = probCache[t];
        const tgt = targetFor(t);
        const hTop = hs[t][layers - 1];
        const dh = dhNext[layers - 1];
        const { data: P } = this.proj;
        for (let r = 0; r < W; r++) {
          const dz = p[r] - (r === tgt ? 1 : 0);
          gProjBias[r] += dz;
          const row = r * H;
          for (let cc = 0; cc < H; cc++) {
            gProj[row + cc] += dz * hTop[cc];
            dh[cc] += dz * P[row + cc];
          }
        }
      }
      // walk the layers downward, threading dx into the layer below
      let dx: Float64Array | null = null;
      for (let l = layers - 1; l >= 0; l--) {
        if (dx !== null) {
          const dh = dhNext[l];
          for (let j = 0; j < H; j++) dh[j] += dx[j];
        }
        const layer = this.lstm[l];
        const { gates, tanhC } = gateCache[t][l];
        const cPrevT = t > 0 ? cs[t - 1][l] : new Float64Array(H);
        const hPrevT = t > 0 ? hs[t - 1][l] : new Float64Array(H);
        const inp = l === 0 ? xs[t] : hs[t][l - 1];
        const Din = layer.W.cols;
        const dh = dhNext[l];
        const dc = dcNext[l];
        const da = new Float64Array(4 * H);
        for (let j = 0; j < H; j++) {
          const i = gates[j];
          const f = gates[H + j];
          const o = gates[2 * H + j];
          const g = gates[3 * H + j];
          const tc = tanhC[j];
          const dcTot = dc[j] + dh[j] * o * (1 - tc * tc);
          da[2 * H + j] = dh[j] * tc * o * (1 - o); // output gate
          da[j] = dcTot * g * i * (1 - i); // input gate
          da[H + j] = dcTot * cPrevT[j] * f * (1 - f); // forget gate
          da[3 * H + j] = dcTot * i * (1 - g * g); // candidate
          dc[j] = dcTot * f; // flows to t-1
          dh[j] = 0; // consumed; recurrent part added below
        }
        const dxHere = new Float64Array(Din);
        const { data: Wd } = layer.W;
        const { data: Ud } = layer.U;
        const gw = gL[l].W;
        const gu = gL[l].U;
        const gb = gL[l].b;
        for (let r = 0; r < 4 * H; r++) {
          const d = da[r];
          if (d === 0) continue;
          gb[r] += d;
          const wRow = r * Din;
          for (let cc = 0; cc < Din; cc++) {
            gw[wRow + cc] += d * inp[cc];
            dxHere[cc] += d * Wd[wRow + cc];
          }
          const uRow = r * H;
          for (let cc = 0; cc < H; cc++) {
            gu[uRow + cc] += d * hPrevT[cc];
            dh[cc] += d * Ud[uRow + cc]; // recurrent gradient for t-1
          }
        }
        dx = dxHere;
      }
      // dx now holds the embedding gradient for stream[t]
      const embRow = stream[t] * D;
      for (let cc = 0; cc < D; cc++) gEmb[embRow + cc] += dx![cc];
    }
    return loss;
  }

  // -- checkpointing -----------------------------------------------------------

  save(): string {
    return JSON.stringify({
      format: "proofsynth-guide-checkpoint-1",
      config: this.config,
      vocab: this.vocab.tokens,
      weights: Object.fromEntries(
        this.params().map((p) => [p.name, { rows: p.rows, cols: p.cols, data: [...p.data] }])
      ),
    });
  }

  static load(text: string): Seq2Seq {
    const raw = JSON.parse(text);
    if (raw.format !== "proofsynth-guide-checkpoint-1") {
      throw new Error(`unknown checkpoint format ${raw.format}`);
    }
    const vocab = new Vocab(raw.vocab);
    const model = new Seq2Seq(vocab, raw.config as ModelConfig, 0);
    for (const p of model.params()) {
      const w = raw.weights[p.name];
      if (!w || w.rows !== p.rows || w.cols !== p.cols) {
        throw new Error(`checkpoint weight ${p.name} has wrong shape`);
      }
      p.data.set(w.data);
    }
    return model;
  }
}

// ---------------------------------------------------------------------------

function sigmoid(x: number): number {
  return 1 / (1 + Math.exp(-x));
}

export function softmax(z: Float64Array): Float64Array {
  let max = -Infinity;
  for (const v of z) if (v > max) max = v;
  const out = new Float64Array(z.length);
  let sum = 0;
  for (let i = 0; i < z.length; i++) {
    const e = Math.exp(z[i] - max);
    out[i] = e;
    sum += e;
  }
  for (let i = 0; i < z.length; i++) out[i] /= sum;
  return out;
}

export function argmax(z: Float64Array): number {
  let best = 0;
  for (let i = 1; i < z.length; i++) if (z[i] > z[best]) best = i;
  return best;
}
