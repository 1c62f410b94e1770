/** Turn raw non-negative slider weights into a valid bet vector.
 *
 * The server validates simplex membership to 1e-9, so the client must send
 * an exactly-normalized vector whatever the slider positions are; an
 * all-zero panel falls back to the uniform bet.
 */
export function normalizeWeights(weights: number[]): number[] {
  const clean = weights.map((w) => (Number.isFinite(w) && w > 0 ? w : 0));
  const total = clean.reduce((acc, w) => acc + w, 0);
  if (total <= 0) {
    return clean.map(() => 1 / clean.length);
  }
  return clean.map((w) => w / total);
}

/** All mass on one outcome. */
export function decisiveBet(k: number, K: number): number[] {
  const q = new Array<number>(K).fill(0);
  q[k] = 1;
  return q;
}

export function betSum(q: number[]): number {
  return q.reduce((acc, x) => acc + x, 0);
}
