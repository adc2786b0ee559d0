/** Results: runs the analysis and renders the perceptual map, the
 * appeal vector with iso-appeal lines, and the (d2, d3) colormap with
 * iso-appeal curves. Points carry hover tooltips (id, dims, appeal,
 * residual); plots pan/zoom via the viewBox on drag and wheel.
 */
import { clear, el, showError } from "../dom.js";
import { ApiError } from "../api.js";
import {
  appealVectorSvg,
  perceptualMapSvg,
  productTooltip,
  surfaceColormapSvg,
  type PointInfo,
} from "../plots.js";
import type { Wizard } from "../wizard.js";
import type { AnalysisReport } from "../types.js";

export function renderResults(root: HTMLElement, wizard: Wizard): void {
  clear(root);
  if (!wizard.gate.canEnter("results")) {
    root.append(el("p", { class: "hint" }, [
      "Analysis unlocks after all three stages are complete.",
    ]));
    return;
  }
  const running = el("p", { class: "hint" }, ["Running analysis…"]);
  root.append(running);

  void (async () => {
    try {
      const report = wizard.report ?? (await wizard.analyze());
      running.remove();
      render(report);
    } catch (error) {
      running.remove();
      showError(root, error instanceof ApiError ? error.detail : String(error));
      root.append(el("pre", { class: "diagnostics" }, [String(error)]));
    }
  })();

  function render(report: AnalysisReport): void {
    const points: PointInfo[] = wizard.products.map((product) => {
      const [x, y] = report.mds.configuration[String(product.id)];
      const dims = `(d1 ${product.dims.d1}, d2 ${product.dims.d2}, d3 ${product.dims.d3})`;
      return { id: product.id, x, y, tooltip: productTooltip(report, product.id, dims) };
    });

    const summary = el("div", { class: "summary" });
    const fit = report.prefmap;
    summary.append(
      el("span", { class: "metric" }, [`stress ${report.mds.stress.toFixed(3)}`]),
      el("span", { class: "metric" }, [`R² ${fit.r_squared.toFixed(3)}`]),
      el("span", { class: "metric" }, [
        `significant at 1%: ${fit.significant_at["0.01"] ? "yes" : "no"}`,
      ]),
      el("span", { class: "metric" }, [
        `appeal-model objective ${report.appeal_model.diagnostics.objective.toFixed(2)}`,
      ]),
    );

    const grid = el("div", { class: "plots-grid" });
    grid.append(
      plotPanel(perceptualMapSvg(points, report.mds.stress, (id) =>
        wizard.api.profileUrl(id, { session: wizard.sessionId }))),
      plotPanel(appealVectorSvg(points, fit.a, fit.b, fit.r_squared)),
      plotPanel(surfaceColormapSvg(
        report.surface.coefficients,
        report.surface.d2_range,
        report.surface.d3_range,
        report.surface.iso_levels,
      )),
    );
    root.append(summary, grid, el("pre", { class: "notes" }, [report.prefmap_notes.join("\n")]));
  }

  function plotPanel(svgMarkup: string): HTMLElement {
    const panel = el("div", { class: "plot-panel" });
    panel.innerHTML = svgMarkup;
    const svg = panel.querySelector("svg");
    if (svg) enablePanZoom(svg);
    return panel;
  }
}

function enablePanZoom(svg: SVGSVGElement): void {
  const initial = (svg.getAttribute("viewBox") ?? "0 0 520 520").split(" ").map(Number);
  let [x, y, w, h] = initial;
  let dragging = false;
  let last: [number, number] = [0, 0];

  function apply(): void {
    svg.setAttribute("viewBox", `${x} ${y} ${w} ${h}`);
  }

  svg.addEventListener("pointerdown", (event) => {
    dragging = true;
    last = [event.clientX, event.clientY];
    svg.setPointerCapture(event.pointerId);
  });
  svg.addEventListener("pointermove", (event) => {
    if (!dragging) return;
    const scale = w / svg.clientWidth;
    x -= (event.clientX - last[0]) * scale;
    y -= (event.clientY - last[1]) * scale;
    last = [event.clientX, event.clientY];
    apply();
  });
  svg.addEventListener("pointerup", () => {
    dragging = false;
  });
  svg.addEventListener("wheel", (event) => {
    event.preventDefault();
    const factor = event.deltaY > 0 ? 1.15 : 1 / 1.15;
    const cx = x + w / 2;
    const cy = y + h / 2;
    w *= factor;
    h *= factor;
    x = cx - w / 2;
    y = cy - h / 2;
    apply();
  });
}
