import { describe, expect, it } from 'vitest';

import { betSum, decisiveBet, normalizeWeights } from '../src/simplex';

// small deterministic generator so the property run is reproducible
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

describe('normalizeWeights', () => {
  it('always produces a valid simplex vector over random slider states', () => {
    const rand = mulberry32(42);
    for (let round = 0; round < 500; round++) {
      const K = 1 + Math.floor(rand() * 8);
      const weights = Array.from({ length: K }, () => {
        const roll = rand();
        if (roll < 0.15) return 0;
        if (roll < 0.2) return -rand(); // hostile input
        if (roll < 0.25) return NaN;
        return rand() * 100;
      });
      const q = normalizeWeights(weights);
      expect(q).toHaveLength(K);
      for (const x of q) {
        expect(x).toBeGreaterThanOrEqual(0);
      }
      expect(Math.abs(betSum(q) - 1)).toBeLessThanOrEqual(1e-12);
    }
  });

  it('falls back to uniform when everything is zero', () => {
    expect(normalizeWeights([0, 0, 0, 0])).toEqual([0.25, 0.25, 0.25, 0.25]);
  });

  it('keeps proportions', () => {
    const q = normalizeWeights([20, 60]);
    expect(q[0]).toBeCloseTo(0.25, 12);
    expect(q[1]).toBeCloseTo(0.75, 12);
  });
});

describe('decisiveBet', () => {
  it('puts all mass on one outcome', () => {
    expect(decisiveBet(1, 3)).toEqual([0, 1, 0]);
    expect(betSum(decisiveBet(0, 5))).toBe(1);
  });
});
