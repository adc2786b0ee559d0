/** Entry point: session bootstrap and stage navigation.
 *
 * Tabs for stages 2, 3 and results stay disabled until the server
 * confirms the preceding stage complete; the active view re-renders on
 * every confirmed transition.
 */
import { ApiClient } from "./api.js";
import { defaultProducts } from "./defaults.js";
import { clear, el, showError } from "./dom.js";
import type { Stage } from "./state.js";
import { Wizard } from "./wizard.js";
import { renderStage1 } from "./views/stage1.js";
import { renderStage2 } from "./views/stage2.js";
import { renderStage3 } from "./views/stage3.js";
import { renderResults } from "./views/results.js";

const TABS: [Stage, string][] = [
  [1, "1 · Differences"],
  [2, "2 · Appeal"],
  [3, "3 · Shape rules"],
  ["results", "Results"],
];

async function boot(): Promise<void> {
  const app = document.getElementById("app")!;
  const api = new ApiClient("");
  const wizard = new Wizard(api, defaultProducts());

  const params = new URLSearchParams(window.location.search);
  const existing = params.get("session");
  try {
    if (existing) await wizard.resume(existing);
    else await wizard.start();
  } catch (error) {
    showError(app, `could not reach the assessment service: ${String(error)}`);
    return;
  }

  const header = el("header", {}, [
    el("h1", {}, ["Glass form assessment"]),
    el("p", { class: "session-id" }, [`session ${wizard.sessionId}`]),
  ]);
  const nav = el("nav", { class: "tabs" });
  const view = el("main", { id: "view" });
  app.append(header, nav, view);

  let active: Stage = firstOpenStage();

  function firstOpenStage(): Stage {
    if (!wizard.gate.stageComplete(1)) return 1;
    if (!wizard.gate.stageComplete(2)) return 2;
    if (!wizard.gate.stageComplete(3)) return 3;
    return "results";
  }

  function refreshNav(): void {
    clear(nav);
    for (const [stage, label] of TABS) {
      const button = el("button", {
        class: "tab" + (active === stage ? " active" : ""),
      }, [label]);
      const allowed = wizard.gate.canEnter(stage);
      button.toggleAttribute("disabled", !allowed);
      button.addEventListener("click", () => {
        if (wizard.gate.canEnter(stage)) {
          active = stage;
          renderActive();
        }
      });
      nav.append(button);
    }
  }

  function renderActive(): void {
    refreshNav();
    if (active === 1) {
      renderStage1(view, wizard, () => {
        active = 2;
        renderActive();
      });
    } else if (active === 2) {
      renderStage2(view, wizard, () => {
        active = 3;
        renderActive();
      });
    } else if (active === 3) {
      renderStage3(view, wizard, () => {
        active = "results";
        renderActive();
      });
    } else {
      renderResults(view, wizard);
    }
  }

  renderActive();
}

void boot();
