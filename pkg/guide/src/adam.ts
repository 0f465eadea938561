/** Adam with the published hyperparameters (alpha 0.001, beta1 0.9,
 * beta2 0.999, epsilon 1e-8). */

import { Param } from "./model.js";

export interface AdamConfig {
  alpha: number;
  beta1: number;
  beta2: number;
  epsilon: number;
}

export const DEFAULT_ADAM: AdamConfig = { alpha: 0.001, beta1: 0.9, beta2: 0.999, epsilon: 1e-8 };

export class Adam {
  private readonly m: Float64Array[];
  private readonly v: Float64Array[];
  private t = 0;

  constructor(private readonly params: Param[], private readonly config: AdamConfig = DEFAULT_ADAM) {
    this.m = params.map((p) => new Float64Array(p.data.length));
    this.v = params.map((p) => new Float64Array(p.data.length));
  }

  /** Apply one update from gradients aligned with the params. */
  step(grads: Float64Array[]): void {
    this.t += 1;
    const { alpha, beta1, beta2, epsilon } = this.config;
    const bc1 = 1 - Math.pow(beta1, this.t);
    const bc2 = 1 - Math.pow(beta2, this.t);
    for (let k = 0; k < this.params.length; k++) {
      const p = this.params[k].data;
      const g = grads[k];
      const m = this.m[k];
      const v = this.v[k];
      for (let i = 0; i < p.length; i++) {
        const gi = g[i];
        m[i] = beta1 * m[i] + (1 - beta1) * gi;
        v[i] = beta2 * v[i] + (1 - beta2) * gi * gi;
        p[i] -= (alpha * (m[i] / bc1)) / (Math.sqrt(v[i] / bc2) + epsilon);
      }
    }
  }
}
