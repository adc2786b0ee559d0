/** Session controller: owns the client, the gate, and the stage models.
 *
 * Every server interaction goes through this class, so protocol
 * conformance (no stage-(n+1) request before stage n is confirmed) is
 * enforced in one place and is directly testable.
 */
import { ApiClient } from "./api.js";
import { CompareModel, PilesModel, RulesModel, StageGate } from "./state.js";
import type { AnalysisReport, ProductSpec, SessionState } from "./types.js";

export class ProtocolViolation extends Error {}

export class Wizard {
  readonly gate = new StageGate();
  compare: CompareModel;
  piles: PilesModel;
  rules: RulesModel;
  session: SessionState | null = null;
  report: AnalysisReport | null = null;

  constructor(
    readonly api: ApiClient,
    readonly products: ProductSpec[],
  ) {
    this.compare = new CompareModel(products);
    this.piles = new PilesModel(products);
    this.rules = new RulesModel(products);
  }

  get sessionId(): string {
    if (!this.session) throw new Error("no session yet");
    return this.session.id;
  }

  async start(sessionId?: string): Promise<void> {
    this.session = await this.api.createSession(this.products, sessionId);
    this.gate.update(this.session.stage_status);
    this.compare.load(this.session);
  }

  async resume(sessionId: string): Promise<void> {
    this.session = await this.api.getSession(sessionId);
    this.gate.update(this.session.stage_status);
    this.compare.load(this.session);
  }

  /** Stage 1: one pairwise judgment. Returns true on overwrite. */
  async rate(i: number, j: number, value: number): Promise<boolean> {
    if (this.gate.stageComplete(1)) {
      throw new ProtocolViolation("stage 1 is already complete");
    }
    const overwrote = this.compare.hasRating(i, j);
    const response = await this.api.postComparison(this.sessionId, i, j, value);
    this.compare.record(i, j, value);
    this.compare.applyCoverage({
      coverage: response.coverage,
      under_covered: {},
      complete: false,
    });
    return overwrote;
  }

  async finishStage1(): Promise<void> {
    if (!this.compare.readyToFinish()) {
      throw new ProtocolViolation(
        `products below ${3} comparisons: ${this.compare.underCovered().join(", ")}`,
      );
    }
    const response = await this.api.completeStage1(this.sessionId);
    this.gate.update(response.stage_status);
  }

  /** Stage 2: submit the complete pile scores. */
  async submitAppeal(): Promise<void> {
    if (!this.gate.canEnter(2)) {
      throw new ProtocolViolation("stage 2 requires server-confirmed stage 1");
    }
    if (!this.piles.complete()) {
      throw new ProtocolViolation(
        `unranked products: ${this.piles.unassigned().join(", ")}`,
      );
    }
    const response = await this.api.putAppeal(this.sessionId, this.piles.toScores());
    this.gate.update(response.stage_status);
  }

  /** Stage 3: submit all rule judgments. */
  async submitRules(): Promise<void> {
    if (!this.gate.canEnter(3)) {
      throw new ProtocolViolation("stage 3 requires server-confirmed stage 2");
    }
    if (!this.rules.complete()) {
      throw new ProtocolViolation(`missing judgments: ${this.rules.missing().length}`);
    }
    const response = await this.api.putRules(this.sessionId, this.rules.toPayload());
    this.gate.update(response.stage_status);
  }

  async analyze(k = 2, seed = 0): Promise<AnalysisReport> {
    if (!this.gate.canEnter("results")) {
      throw new ProtocolViolation("analysis requires all three stages complete");
    }
    this.report = await this.api.analyze(this.sessionId, k, seed);
    return this.report;
  }
}
