/** Client-side protocol state: stage gating and per-stage editing models.
 *
 * Gating is strictly server-confirmed: a stage opens only when the last
 * session state received from the server marks its predecessor
 * complete. Optimistic local edits never unlock navigation.
 */
import type { CoverageResponse, ProductSpec, Rule, SessionState } from "./types.js";
import { MIN_COMPARISONS, RULES } from "./types.js";

export type Stage = 1 | 2 | 3 | "results";

export class StageGate {
  private status: Record<"1" | "2" | "3", string> = {
    "1": "open",
    "2": "open",
    "3": "open",
  };

  /** Feed every server response that carries stage_status through here. */
  update(status: Record<string, string>): void {
    this.status = {
      "1": status["1"] ?? this.status["1"],
      "2": status["2"] ?? this.status["2"],
      "3": status["3"] ?? this.status["3"],
    };
  }

  stageComplete(stage: 1 | 2 | 3): boolean {
    return this.status[String(stage) as "1" | "2" | "3"] === "complete";
  }

  /** Navigation rule: stage n+1 needs server-confirmed completion of n. */
  canEnter(stage: Stage): boolean {
    if (stage === 1) return true;
    if (stage === 2) return this.stageComplete(1);
    if (stage === 3) return this.stageComplete(2);
    return this.stageComplete(3);
  }
}

/** Stage 1: free-choice pairwise comparisons with coverage tracking. */
export class CompareModel {
  private ratings = new Map<string, number>();
  private counts = new Map<number, number>();

  constructor(readonly products: ProductSpec[]) {
    for (const product of products) this.counts.set(product.id, 0);
  }

  private key(i: number, j: number): string {
    return i < j ? `${i}:${j}` : `${j}:${i}`;
  }

  /** Seed from a server session snapshot. */
  load(session: SessionState): void {
    this.ratings.clear();
    for (const product of this.products) this.counts.set(product.id, 0);
    for (const [i, j, value] of session.stage1.entries) this.record(i, j, value);
  }

  hasRating(i: number, j: number): boolean {
    return this.ratings.has(this.key(i, j));
  }

  ratingOf(i: number, j: number): number | undefined {
    return this.ratings.get(this.key(i, j));
  }

  /** Returns true when this overwrites an existing judgment. */
  record(i: number, j: number, value: number): boolean {
    if (i === j) throw new Error("cannot compare a product with itself");
    if (value < 0 || value > 3 || !Number.isInteger(value)) {
      throw new Error(`dissimilarity must be an integer 0..3, got ${value}`);
    }
    const key = this.key(i, j);
    const overwrite = this.ratings.has(key);
    if (!overwrite) {
      this.counts.set(i, (this.counts.get(i) ?? 0) + 1);
      this.counts.set(j, (this.counts.get(j) ?? 0) + 1);
    }
    this.ratings.set(key, value);
    return overwrite;
  }

  coverage(): Map<number, number> {
    return new Map(this.counts);
  }

  coverageOf(id: number): number {
    return this.counts.get(id) ?? 0;
  }

  underCovered(): number[] {
    return this.products
      .filter((p) => this.coverageOf(p.id) < MIN_COMPARISONS)
      .map((p) => p.id);
  }

  /** All products covered at least three times? */
  readyToFinish(): boolean {
    return this.underCovered().length === 0;
  }

  applyCoverage(response: CoverageResponse): void {
    for (const [id, count] of Object.entries(response.coverage)) {
      this.counts.set(Number(id), count);
    }
  }

  /** Helper: propose the least-covered product with its least-covered
   * unrated partner (free choice remains with the subject). */
  suggestPair(): [number, number] | null {
    const byNeed = [...this.products].sort(
      (a, b) => this.coverageOf(a.id) - this.coverageOf(b.id) || a.id - b.id,
    );
    for (const first of byNeed) {
      const partners = byNeed.filter(
        (p) => p.id !== first.id && !this.hasRating(first.id, p.id),
      );
      if (partners.length > 0) {
        return [first.id, partners[0].id];
      }
    }
    return null;
  }
}

export interface Pile {
  score: number;
  productIds: number[];
}

/** Stage 2: rank into piles of similar appeal, one 0..10 score per pile. */
export class PilesModel {
  piles: Pile[] = [];
  private unranked: Set<number>;

  constructor(readonly products: ProductSpec[]) {
    this.unranked = new Set(products.map((p) => p.id));
  }

  addPile(score = 5): number {
    this.piles.push({ score: clampScore(score), productIds: [] });
    return this.piles.length - 1;
  }

  setScore(pileIndex: number, score: number): void {
    this.piles[pileIndex].score = clampScore(score);
  }

  assign(productId: number, pileIndex: number): void {
    if (pileIndex < 0 || pileIndex >= this.piles.length) {
      throw new Error(`no pile ${pileIndex}`);
    }
    for (const pile of this.piles) {
      const at = pile.productIds.indexOf(productId);
      if (at >= 0) pile.productIds.splice(at, 1);
    }
    this.piles[pileIndex].productIds.push(productId);
    this.unranked.delete(productId);
  }

  unassigned(): number[] {
    return [...this.unranked].sort((a, b) => a - b);
  }

  /** Every product must be ranked before the stage can complete. */
  complete(): boolean {
    return this.unranked.size === 0;
  }

  /** Products in one pile share the pile's score. */
  toScores(): Record<number, number> {
    const scores: Record<number, number> = {};
    for (const pile of this.piles) {
      for (const id of pile.productIds) scores[id] = pile.score;
    }
    return scores;
  }
}

export function clampScore(score: number): number {
  return Math.min(10, Math.max(0, score));
}

/** Stage 3: one -1/0/+1 judgment per product and rule. */
export class RulesModel {
  private codes = new Map<string, -1 | 0 | 1>();

  constructor(readonly products: ProductSpec[]) {}

  set(productId: number, rule: Rule, code: -1 | 0 | 1): void {
    this.codes.set(`${productId}:${rule}`, code);
  }

  get(productId: number, rule: Rule): -1 | 0 | 1 | undefined {
    return this.codes.get(`${productId}:${rule}`);
  }

  missing(): [number, Rule][] {
    const out: [number, Rule][] = [];
    for (const product of this.products) {
      for (const rule of RULES) {
        if (!this.codes.has(`${product.id}:${rule}`)) out.push([product.id, rule]);
      }
    }
    return out;
  }

  /** All products x all rules judged? */
  complete(): boolean {
    return this.missing().length === 0;
  }

  toPayload(): Record<number, [number, number, number]> {
    const payload: Record<number, [number, number, number]> = {};
    for (const product of this.products) {
      payload[product.id] = RULES.map((rule) => {
        const code = this.get(product.id, rule);
        if (code === undefined) throw new Error(`missing judgment for ${product.id} ${rule}`);
        return code;
      }) as [number, number, number];
    }
    return payload;
  }
}
