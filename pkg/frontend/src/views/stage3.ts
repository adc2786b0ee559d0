/** Stage 3: for each glass and shape rule, the current profile and the
 * rule-applied preview render side by side; the subject judges whether
 * the change raises, leaves, or lowers the appeal.
 */
import { clear, el, showError } from "../dom.js";
import { ApiError } from "../api.js";
import type { Wizard } from "../wizard.js";
import type { Rule } from "../types.js";
import { RULES, RULE_DESCRIPTIONS } from "../types.js";

const CHOICES: [string, -1 | 0 | 1][] = [
  ["↑ more appealing", 1],
  ["= no change", 0],
  ["↓ less appealing", -1],
];

export function renderStage3(root: HTMLElement, wizard: Wizard, onComplete: () => void): void {
  clear(root);
  const hint = el("p", { class: "hint" }, [
    "Each rule slightly enlarges one dimension. Compare the current " +
      "glass (left) with the modified one (right) and judge the effect " +
      "on its appeal. All judgments are required.",
  ]);
  const progress = el("p", { class: "progress" });
  const table = el("div", { class: "rules-table" });
  const submit = el("button", { class: "primary", disabled: "true" }, ["Finish stage 3"]);

  function refreshProgress(): void {
    const missing = wizard.rules.missing().length;
    const total = wizard.products.length * RULES.length;
    progress.textContent = `${total - missing} / ${total} judgments recorded`;
    submit.toggleAttribute("disabled", !wizard.rules.complete());
  }

  function row(productId: number, rule: Rule): HTMLElement {
    const cell = el("div", { class: "rule-cell", "data-product": String(productId), "data-rule": rule });
    const before = el("img", {
      src: wizard.api.profileUrl(productId, { session: wizard.sessionId }),
      alt: `G${productId}`,
      class: "preview",
    });
    const after = el("img", {
      src: wizard.api.profileUrl(productId, { rule, session: wizard.sessionId }),
      alt: `G${productId} with ${rule}`,
      class: "preview",
    });
    const buttons = el("div", { class: "choices" });
    for (const [label, code] of CHOICES) {
      const button = el("button", {
        class:
          "choice" + (wizard.rules.get(productId, rule) === code ? " chosen" : ""),
      }, [label]);
      button.addEventListener("click", () => {
        wizard.rules.set(productId, rule, code);
        for (const sibling of buttons.children) sibling.classList.remove("chosen");
        button.classList.add("chosen");
        refreshProgress();
      });
      buttons.append(button);
    }
    cell.append(
      el("h4", {}, [`G${productId} — ${rule}: ${RULE_DESCRIPTIONS[rule]}`]),
      el("div", { class: "side-by-side" }, [before, el("span", { class: "arrow" }, ["→"]), after]),
      buttons,
    );
    return cell;
  }

  for (const product of wizard.products) {
    for (const rule of RULES) {
      table.append(row(product.id, rule));
    }
  }

  submit.addEventListener("click", () => {
    void (async () => {
      try {
        await wizard.submitRules();
        onComplete();
      } catch (error) {
        showError(root, error instanceof ApiError ? error.detail : String(error));
      }
    })();
  });

  root.append(hint, progress, table, el("div", { class: "actions" }, [submit]));
  refreshProgress();
}
