import { describe, expect, it } from "vitest";

import { CompareModel, PilesModel, RulesModel, StageGate, clampScore } from "../src/state.js";
import { defaultProducts } from "../src/defaults.js";

describe("StageGate", () => {
  it("only stage 1 is reachable before any confirmation", () => {
    const gate = new StageGate();
    expect(gate.canEnter(1)).toBe(true);
    expect(gate.canEnter(2)).toBe(false);
    expect(gate.canEnter(3)).toBe(false);
    expect(gate.canEnter("results")).toBe(false);
  });

  it("unlocks stages only from server-confirmed status", () => {
    const gate = new StageGate();
    gate.update({ "1": "complete", "2": "open", "3": "open" });
    expect(gate.canEnter(2)).toBe(true);
    expect(gate.canEnter(3)).toBe(false);
    gate.update({ "1": "complete", "2": "complete", "3": "open" });
    expect(gate.canEnter(3)).toBe(true);
    expect(gate.canEnter("results")).toBe(false);
    gate.update({ "1": "complete", "2": "complete", "3": "complete" });
    expect(gate.canEnter("results")).toBe(true);
  });
});

describe("CompareModel", () => {
  it("tracks coverage per product", () => {
    const model = new CompareModel(defaultProducts());
    model.record(1, 7, 0);
    model.record(7, 2, 2);
    expect(model.coverageOf(7)).toBe(2);
    expect(model.coverageOf(1)).toBe(1);
    expect(model.coverageOf(3)).toBe(0);
  });

  it("re-rating a pair overwrites without double-counting", () => {
    const model = new CompareModel(defaultProducts());
    expect(model.record(1, 7, 0)).toBe(false);
    expect(model.record(7, 1, 3)).toBe(true);
    expect(model.ratingOf(1, 7)).toBe(3);
    expect(model.coverageOf(1)).toBe(1);
  });

  it("finish is blocked until every product has three comparisons", () => {
    const model = new CompareModel(defaultProducts());
    expect(model.readyToFinish()).toBe(false);
    // a ring plus two chords covers everyone three times
    const n = 18;
    for (let i = 1; i <= n; i++) {
      model.record(i, (i % n) + 1, 1);
      model.record(i, ((i + 1) % n) + 1, 2);
    }
    expect(model.underCovered()).toEqual([]);
    expect(model.readyToFinish()).toBe(true);
  });

  it("rejects self-pairs and out-of-scale values", () => {
    const model = new CompareModel(defaultProducts());
    expect(() => model.record(3, 3, 1)).toThrow();
    expect(() => model.record(1, 2, 4)).toThrow();
    expect(() => model.record(1, 2, -1)).toThrow();
  });

  it("suggests the least-covered product first", () => {
    const model = new CompareModel(defaultProducts());
    for (let j = 2; j <= 4; j++) model.record(1, j, 1);
    const pair = model.suggestPair();
    expect(pair).not.toBeNull();
    expect(model.coverageOf(pair![0])).toBe(0);
  });
});

describe("PilesModel", () => {
  it("products in one pile share the pile score", () => {
    const model = new PilesModel(defaultProducts());
    const pile = model.addPile(1);
    model.assign(8, pile);
    model.assign(14, pile);
    const scores = model.toScores();
    expect(scores[8]).toBe(1);
    expect(scores[14]).toBe(1);
  });

  it("slider values clamp to the hedonic scale", () => {
    expect(clampScore(-2)).toBe(0);
    expect(clampScore(12)).toBe(10);
    expect(clampScore(6.5)).toBe(6.5);
    const model = new PilesModel(defaultProducts());
    const pile = model.addPile(99);
    expect(model.piles[pile].score).toBe(10);
  });

  it("completion is blocked while any product is unranked", () => {
    const model = new PilesModel(defaultProducts());
    const pile = model.addPile(5);
    expect(model.complete()).toBe(false);
    for (const product of defaultProducts()) model.assign(product.id, pile);
    expect(model.complete()).toBe(true);
    expect(model.unassigned()).toEqual([]);
  });

  it("reassignment moves a product between piles", () => {
    const model = new PilesModel(defaultProducts());
    const low = model.addPile(2);
    const high = model.addPile(9);
    model.assign(4, low);
    model.assign(4, high);
    expect(model.toScores()[4]).toBe(9);
    expect(model.piles[low].productIds).not.toContain(4);
  });
});

describe("RulesModel", () => {
  it("requires all products x rules before completion", () => {
    const model = new RulesModel(defaultProducts());
    expect(model.missing().length).toBe(18 * 3);
    for (const product of defaultProducts()) {
      model.set(product.id, "R1", -1);
      model.set(product.id, "R2", 1);
    }
    expect(model.complete()).toBe(false);
    for (const product of defaultProducts()) model.set(product.id, "R3", 0);
    expect(model.complete()).toBe(true);
  });

  it("payload carries codes in rule order", () => {
    const model = new RulesModel(defaultProducts());
    for (const product of defaultProducts()) {
      model.set(product.id, "R1", -1);
      model.set(product.id, "R2", 0);
      model.set(product.id, "R3", 1);
    }
    expect(model.toPayload()[7]).toEqual([-1, 0, 1]);
  });
});
