// Application shell: owns the view model, selection, navigation history,
// and all DOM panels. Read-only by design; the explorer never mutates or
// re-submits workflows.

import { NavigationHistory } from "./history.js";
import { computeLayout } from "./layout.js";
import { computeStats, neighborsOf, parseProvDocument } from "./prov.js";
import { applySelection, detailRows, renderGraph } from "./render.js";
import type { GraphStats, ViewGraph } from "./types.js";

const CANVAS_W = 1100;
const CANVAS_H = 700;

export class ExplorerApp {
  readonly root: HTMLElement;
  private view: ViewGraph | null = null;
  private stats: GraphStats | null = null;
  private history = new NavigationHistory();
  private selection: string | null = null;
  private showInfoBoxes = false;

  private banner!: HTMLElement;
  private svg!: SVGSVGElement;
  private detailPanel!: HTMLElement;
  private statsPanel!: HTMLElement;
  private fileInput!: HTMLInputElement;

  constructor(root: HTMLElement) {
    this.root = root;
    this.buildDom();
  }

  // ------------------------------------------------------------------ //
  // loading
  // ------------------------------------------------------------------ //

  loadDocumentText(text: string): boolean {
    try {
      const view = parseProvDocument(text);
      this.view = view;
      this.stats = computeStats(view);
      this.history = new NavigationHistory();
      this.selection = null;
      this.hideError();
      this.renderAll();
      return true;
    } catch (err) {
      // no partial render on errors
      this.view = null;
      this.stats = null;
      this.svg.textContent = "";
      this.detailPanel.textContent = "";
      this.statsPanel.hidden = true;
      this.showError(`could not load document: ${(err as Error).message}`);
      return false;
    }
  }

  async loadFromUrl(url: string): Promise<boolean> {
    this.showError(`loading ${url} …`, "loading");
    try {
      const response = await fetch(url);
      if (!response.ok) {
        throw new Error(`fetch failed with status ${response.status}`);
      }
      return this.loadDocumentText(await response.text());
    } catch (err) {
      this.view = null;
      this.svg.textContent = "";
      this.showError(`could not load ${url}: ${(err as Error).message}`);
      return false;
    }
  }

  // ------------------------------------------------------------------ //
  // navigation
  // ------------------------------------------------------------------ //

  selectNode(id: string): void {
    if (!this.view || !this.view.nodes.some((n) => n.id === id)) return;
    this.history.push(id);
    this.setSelection(id);
  }

  back(): void {
    const id = this.history.back();
    if (id !== null) this.setSelection(id);
  }

  forward(): void {
    const id = this.history.forward();
    if (id !== null) this.setSelection(id);
  }

  currentSelection(): string | null {
    return this.selection;
  }

  historyEntries(): readonly string[] {
    return this.history.entries();
  }

  getStats(): GraphStats | null {
    return this.stats;
  }

  toggleStats(): void {
    this.statsPanel.hidden = !this.statsPanel.hidden;
  }

  toggleInfoBoxes(): void {
    this.showInfoBoxes = !this.showInfoBoxes;
    this.renderAll();
  }

  // ------------------------------------------------------------------ //
  // internals
  // ------------------------------------------------------------------ //

  private setSelection(id: string): void {
    this.selection = id;
    if (!this.view) return;
    applySelection(this.svg, id, neighborsOf(this.view, id));
    this.renderDetail(id);
    this.updateNavButtons();
  }

  private renderAll(): void {
    if (!this.view) return;
    const positions = computeLayout(this.view.nodes, this.view.edges, {
      width: CANVAS_W,
      height: CANVAS_H,
    });
    renderGraph(
      this.svg,
      this.view,
      positions,
      { onNodeClick: (id) => this.selectNode(id) },
      this.showInfoBoxes,
    );
    if (this.selection) {
      applySelection(this.svg, this.selection, neighborsOf(this.view, this.selection));
    }
    this.renderStats();
    this.updateNavButtons();
  }

  private renderDetail(id: string): void {
    const node = this.view?.nodes.find((n) => n.id === id);
    this.detailPanel.textContent = "";
    if (!node) return;
    const heading = document.createElement("h3");
    heading.textContent = node.label;
    this.detailPanel.appendChild(heading);
    const list = document.createElement("dl");
    for (const [key, value] of detailRows(node)) {
      if (!value) continue;
      const dt = document.createElement("dt");
      dt.textContent = key;
      const dd = document.createElement("dd");
      dd.textContent = value;
      list.appendChild(dt);
      list.appendChild(dd);
    }
    this.detailPanel.appendChild(list);
    const idLine = document.createElement("p");
    idLine.className = "node-id";
    idLine.textContent = id;
    this.detailPanel.appendChild(idLine);
  }

  private renderStats(): void {
    this.statsPanel.textContent = "";
    if (!this.stats) return;
    const rows: Array<[string, string]> = [
      ["activities", String(this.stats.activity_count)],
      ["entities", String(this.stats.entity_count)],
      ["agents", String(this.stats.agent_count)],
      ["total duration (s)", this.stats.total_duration_s.toFixed(3)],
      ["longest chain", String(this.stats.critical_path_len)],
    ];
    for (const [kind, count] of Object.entries(this.stats.relation_count_by_kind)) {
      rows.push([kind, String(count)]);
    }
    const table = document.createElement("table");
    for (const [label, value] of rows) {
      const tr = document.createElement("tr");
      const th = document.createElement("th");
      th.textContent = label;
      const td = document.createElement("td");
      td.textContent = value;
      td.setAttribute("data-stat", label);
      tr.appendChild(th);
      tr.appendChild(td);
      table.appendChild(tr);
    }
    this.statsPanel.appendChild(table);
  }

  private updateNavButtons(): void {
    const backButton = this.root.querySelector<HTMLButtonElement>("#btn-back");
    const forwardButton = this.root.querySelector<HTMLButtonElement>("#btn-forward");
    if (backButton) backButton.disabled = !this.history.canBack();
    if (forwardButton) forwardButton.disabled = !this.history.canForward();
  }

  private showError(message: string, kind = "error"): void {
    this.banner.textContent = message;
    this.banner.dataset.kind = kind;
    this.banner.hidden = false;
  }

  private hideError(): void {
    this.banner.hidden = true;
    this.banner.textContent = "";
  }

  private buildDom(): void {
    this.root.textContent = "";

    const toolbar = document.createElement("div");
    toolbar.className = "toolbar";

    this.fileInput = document.createElement("input");
    this.fileInput.type = "file";
    this.fileInput.id = "file-input";
    this.fileInput.accept = ".json,application/json";
    this.fileInput.addEventListener("change", () => {
      const file = this.fileInput.files?.[0];
      if (!file) return;
      file.text().then((text) => this.loadDocumentText(text));
    });
    toolbar.appendChild(this.fileInput);

    toolbar.appendChild(this.button("btn-back", "◀ back", () => this.back()));
    toolbar.appendChild(this.button("btn-forward", "forward ▶", () => this.forward()));
    toolbar.appendChild(this.button("btn-stats", "stats", () => this.toggleStats()));
    toolbar.appendChild(this.button("btn-info", "info boxes", () => this.toggleInfoBoxes()));
    this.root.appendChild(toolbar);

    this.banner = document.createElement("div");
    this.banner.id = "error-banner";
    this.banner.hidden = true;
    this.root.appendChild(this.banner);

    const mainArea = document.createElement("div");
    mainArea.className = "main-area";

    this.svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    this.svg.id = "canvas";
    this.svg.setAttribute("viewBox", `0 0 ${CANVAS_W} ${CANVAS_H}`);
    mainArea.appendChild(this.svg);

    const side = document.createElement("aside");
    this.detailPanel = document.createElement("div");
    this.detailPanel.id = "detail-panel";
    side.appendChild(this.detailPanel);
    this.statsPanel = document.createElement("div");
    this.statsPanel.id = "stats-panel";
    this.statsPanel.hidden = true;
    side.appendChild(this.statsPanel);
    mainArea.appendChild(side);

    this.root.appendChild(mainArea);
  }

  private button(id: string, label: string, onClick: () => void): HTMLButtonElement {
    const button = document.createElement("button");
    button.id = id;
    button.type = "button";
    button.textContent = label;
    button.addEventListener("click", onClick);
    return button;
  }
}
