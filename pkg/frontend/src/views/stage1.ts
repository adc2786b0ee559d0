/** Stage 1: free-choice pairwise dissimilarity judgments.
 *
 * The subject picks any two glasses from the gallery, then one of the
 * four difference labels. Coverage badges show each product's
 * comparison count; the finish button arms only when every product has
 * three or more.
 */
import { clear, el, showError } from "../dom.js";
import { ApiError } from "../api.js";
import type { Wizard } from "../wizard.js";
import { DISSIMILARITY_LABELS, MIN_COMPARISONS } from "../types.js";

export function renderStage1(root: HTMLElement, wizard: Wizard, onComplete: () => void): void {
  clear(root);
  const selected: number[] = [];

  const status = el("p", { class: "hint" }, [
    "Pick any two glasses, then judge how different they look. " +
      `Every glass needs at least ${MIN_COMPARISONS} comparisons.`,
  ]);
  const gallery = el("div", { class: "gallery" });
  const controls = el("div", { class: "compare-controls" });
  const suggest = el("button", { class: "secondary" }, ["Suggest a pair"]);
  const finish = el("button", { class: "primary", disabled: "true" }, ["Finish stage 1"]);

  function refreshGallery(): void {
    clear(gallery);
    for (const product of wizard.products) {
      const count = wizard.compare.coverageOf(product.id);
      const card = el("figure", {
        class:
          "product-card" +
          (selected.includes(product.id) ? " selected" : "") +
          (count < MIN_COMPARISONS ? " needs-coverage" : ""),
        "data-product": String(product.id),
      });
      const img = el("img", {
        src: wizard.api.profileUrl(product.id, { session: wizard.sessionId }),
        alt: product.label,
      });
      const badge = el("span", {
        class: "badge" + (count >= MIN_COMPARISONS ? " ok" : ""),
        title: `${count} comparisons`,
      }, [String(count)]);
      card.append(img, el("figcaption", {}, [product.label, " ", badge]));
      card.addEventListener("click", () => toggle(product.id));
      gallery.append(card);
    }
    finish.toggleAttribute("disabled", !wizard.compare.readyToFinish());
  }

  function toggle(productId: number): void {
    const at = selected.indexOf(productId);
    if (at >= 0) selected.splice(at, 1);
    else {
      selected.push(productId);
      if (selected.length > 2) selected.shift();
    }
    refreshControls();
    refreshGallery();
  }

  function refreshControls(): void {
    clear(controls);
    if (selected.length !== 2) {
      controls.append(el("p", { class: "hint" }, ["Select two glasses to compare."]));
      return;
    }
    const [i, j] = selected;
    const existing = wizard.compare.ratingOf(i, j);
    controls.append(
      el("p", {}, [
        `How different are G${i} and G${j}?`,
        existing !== undefined
          ? ` (currently: ${DISSIMILARITY_LABELS[existing]})`
          : "",
      ]),
    );
    DISSIMILARITY_LABELS.forEach((label, value) => {
      const button = el("button", { class: "label-choice" }, [label]);
      button.addEventListener("click", () => void rate(i, j, value));
      controls.append(button);
    });
  }

  async function rate(i: number, j: number, value: number): Promise<void> {
    if (
      wizard.compare.hasRating(i, j) &&
      !window.confirm(`G${i} vs G${j} is already rated. Overwrite?`)
    ) {
      return;
    }
    try {
      await wizard.rate(i, j, value);
      selected.length = 0;
      refreshControls();
      refreshGallery();
    } catch (error) {
      showError(root, error instanceof ApiError ? error.detail : String(error));
    }
  }

  suggest.addEventListener("click", () => {
    const pair = wizard.compare.suggestPair();
    if (pair) {
      selected.length = 0;
      selected.push(...pair);
      refreshControls();
      refreshGallery();
    }
  });

  finish.addEventListener("click", () => {
    void (async () => {
      try {
        await wizard.finishStage1();
        onComplete();
      } catch (error) {
        showError(root, error instanceof ApiError ? error.detail : String(error));
        refreshGallery();
      }
    })();
  });

  root.append(status, gallery, controls, el("div", { class: "actions" }, [suggest, finish]));
  refreshControls();
  refreshGallery();
}
