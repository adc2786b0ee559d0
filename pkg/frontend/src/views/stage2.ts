/** Stage 2: rank the glasses into piles of similar appeal, then give
 * each pile an absolute 0..10 score. Glasses in one pile share one
 * score. Drag a card onto a pile, or click a pile while a card is
 * selected.
 */
import { clear, el, showError } from "../dom.js";
import { ApiError } from "../api.js";
import { clampScore } from "../state.js";
import type { Wizard } from "../wizard.js";

export function renderStage2(root: HTMLElement, wizard: Wizard, onComplete: () => void): void {
  clear(root);
  let selectedProduct: number | null = null;

  const hint = el("p", { class: "hint" }, [
    "Drag each glass into a pile of similar appeal (or select a glass, " +
      "then click a pile). Give every pile a 0–10 appeal score; all " +
      "glasses in a pile share its score.",
  ]);
  const unrankedRow = el("div", { class: "unranked-row" });
  const pilesRow = el("div", { class: "piles-row" });
  const addPile = el("button", { class: "secondary" }, ["Add pile"]);
  const submit = el("button", { class: "primary", disabled: "true" }, ["Finish stage 2"]);

  function productCard(productId: number): HTMLElement {
    const card = el("figure", {
      class: "product-card small" + (selectedProduct === productId ? " selected" : ""),
      draggable: "true",
    });
    card.append(
      el("img", {
        src: wizard.api.profileUrl(productId, { session: wizard.sessionId }),
        alt: `G${productId}`,
      }),
      el("figcaption", {}, [`G${productId}`]),
    );
    card.addEventListener("click", () => {
      selectedProduct = selectedProduct === productId ? null : productId;
      refresh();
    });
    card.addEventListener("dragstart", (event) => {
      event.dataTransfer?.setData("text/plain", String(productId));
    });
    return card;
  }

  function refresh(): void {
    clear(unrankedRow);
    const unassigned = wizard.piles.unassigned();
    unrankedRow.append(
      el("h3", {}, [`Unranked (${unassigned.length})`]),
      ...unassigned.map(productCard),
    );

    clear(pilesRow);
    wizard.piles.piles.forEach((pile, index) => {
      const slider = el("input", {
        type: "range",
        min: "0",
        max: "10",
        step: "0.5",
        value: String(pile.score),
      }) as HTMLInputElement;
      const scoreLabel = el("span", { class: "score" }, [pile.score.toFixed(1)]);
      slider.addEventListener("input", () => {
        wizard.piles.setScore(index, clampScore(Number(slider.value)));
        scoreLabel.textContent = wizard.piles.piles[index].score.toFixed(1);
      });
      const dropzone = el("div", { class: "pile" });
      dropzone.append(
        el("h3", {}, [`Pile ${index + 1}`]),
        el("div", { class: "pile-score" }, ["appeal ", scoreLabel]),
        slider,
        el("div", { class: "pile-members" }, [...pile.productIds.map(productCard)]),
      );
      dropzone.addEventListener("dragover", (event) => event.preventDefault());
      dropzone.addEventListener("drop", (event) => {
        event.preventDefault();
        const id = Number(event.dataTransfer?.getData("text/plain"));
        if (id) {
          wizard.piles.assign(id, index);
          refresh();
        }
      });
      dropzone.addEventListener("click", (event) => {
        if (selectedProduct !== null && !(event.target instanceof HTMLInputElement)) {
          wizard.piles.assign(selectedProduct, index);
          selectedProduct = null;
          refresh();
        }
      });
      pilesRow.append(dropzone);
    });
    submit.toggleAttribute("disabled", !wizard.piles.complete());
  }

  addPile.addEventListener("click", () => {
    wizard.piles.addPile();
    refresh();
  });

  submit.addEventListener("click", () => {
    void (async () => {
      try {
        await wizard.submitAppeal();
        onComplete();
      } catch (error) {
        showError(root, error instanceof ApiError ? error.detail : String(error));
      }
    })();
  });

  if (wizard.piles.piles.length === 0) {
    wizard.piles.addPile(2);
    wizard.piles.addPile(5);
    wizard.piles.addPile(8);
  }
  root.append(hint, unrankedRow, pilesRow, el("div", { class: "actions" }, [addPile, submit]));
  refresh();
}
