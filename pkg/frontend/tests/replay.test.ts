/** Replays the bundled study through the UI layer against the contract
 * fake, and asserts the stored session matches the fixture tables cell
 * for cell. The server-side half of this round trip (same sequence
 * against the real service, exported and re-analyzed) lives in the
 * backend's test suite.
 */
import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { Wizard } from "../src/wizard.js";
import { defaultProducts } from "../src/defaults.js";
import { FakeServer } from "./fake-server.js";
import { FIXTURE_COMPARISONS, FIXTURE_PILES, FIXTURE_RULES } from "./fixture-data.js";

describe("fixture session replay", () => {
  it("reproduces the bundled tables exactly through the wizard", async () => {
    const server = new FakeServer();
    const wizard = new Wizard(new ApiClient("", server.fetch), defaultProducts());
    await wizard.start("replay");

    // stage 1: the subject's 61 free-choice comparisons
    for (const [i, j, value] of FIXTURE_COMPARISONS) {
      await wizard.rate(i, j, value);
    }
    expect(wizard.compare.readyToFinish()).toBe(true);
    await wizard.finishStage1();

    // stage 2: piles of equal appeal, one slider value per pile
    for (const [score, productIds] of FIXTURE_PILES) {
      const pile = wizard.piles.addPile(score);
      for (const id of productIds) wizard.piles.assign(id, pile);
    }
    expect(wizard.piles.complete()).toBe(true);
    await wizard.submitAppeal();

    // stage 3: one judgment per product and rule
    for (const [id, [r1, r2, r3]] of Object.entries(FIXTURE_RULES)) {
      wizard.rules.set(Number(id), "R1", r1 as -1 | 0 | 1);
      wizard.rules.set(Number(id), "R2", r2 as -1 | 0 | 1);
      wizard.rules.set(Number(id), "R3", r3 as -1 | 0 | 1);
    }
    await wizard.submitRules();

    // the stored session equals the fixture tables
    const stored = server.session("replay")!;
    const entries = [...stored.entries.values()].sort(
      (a, b) => a[0] - b[0] || a[1] - b[1],
    );
    const expected = [...FIXTURE_COMPARISONS].sort(
      (a, b) => a[0] - b[0] || a[1] - b[1],
    );
    expect(entries).toEqual(expected);

    const scores = stored.appeal!;
    for (const [score, productIds] of FIXTURE_PILES) {
      for (const id of productIds) expect(scores[String(id)]).toBe(score);
    }
    expect(Object.keys(scores)).toHaveLength(18);

    for (const [id, codes] of Object.entries(FIXTURE_RULES)) {
      expect(stored.rules![id]).toEqual(codes);
    }

    // spot checks straight from the published tables
    expect(scores["4"]).toBe(10);
    expect(scores["2"]).toBe(0);
    expect(scores["8"]).toBe(1);
    expect(scores["14"]).toBe(1);
    expect(stored.rules!["7"]).toEqual([-1, 1, -1]);
    expect(stored.rules!["10"]).toEqual([-1, 1, 0]);
  });

  it("analysis is reachable only after the full replay", async () => {
    const server = new FakeServer();
    const wizard = new Wizard(new ApiClient("", server.fetch), defaultProducts());
    await wizard.start("replay2");
    for (const [i, j, value] of FIXTURE_COMPARISONS) {
      await wizard.rate(i, j, value);
    }
    await wizard.finishStage1();
    await expect(wizard.analyze()).rejects.toThrow();
    expect(server.mutationPaths().some((p) => p.endsWith("/analyze"))).toBe(false);
  });
});
