/** Pure HTML renderers for the three panels and the link overlay.
 *
 * Rendering is string-based so the same code drives the browser (via
 * innerHTML in main.ts) and headless tests (string assertions, no DOM).
 */

import { INTENTS, type LinkOverlay, type UiStore } from "./state.js";
import type { Attribute, CanvasElement, RankedCollection } from "./types.js";
import { isViewSpec } from "./types.js";

const ATTR_ICONS: Record<Attribute["attrType"], string> = {
  quantitative: "Q",
  categorical: "C",
  geographic: "G",
  temporal: "T",
};

const INTENT_LABELS: Record<string, string> = {
  measureAnalysis: "Measure",
  changeAnalysis: "Change",
  categoryAnalysis: "Category",
  distributionAnalysis: "Distribution",
};

export function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderInputPanel(
  attributes: Attribute[],
  selectedAttrs: string[],
  selectedIntents: string[],
): string {
  const attrItems = attributes
    .map((a) => {
      const on = selectedAttrs.includes(a.name) ? " selected" : "";
      return (
        `<li class="attr${on}" data-attr="${esc(a.name)}">` +
        `<span class="type-icon type-${a.attrType}">${ATTR_ICONS[a.attrType]}</span>` +
        `${esc(a.name)}</li>`
      );
    })
    .join("");
  const intentItems = INTENTS.map((i) => {
    const on = selectedIntents.includes(i) ? " selected" : "";
    return `<li class="intent${on}" data-intent="${i}">${INTENT_LABELS[i]}</li>`;
  }).join("");
  return (
    `<section class="input-panel">` +
    `<h2>Attributes</h2><ul class="attrs">${attrItems}</ul>` +
    `<h2>Intents</h2><ul class="intents">${intentItems}</ul>` +
    `</section>`
  );
}

export function renderCollectionBrowser(
  collections: RankedCollection[],
  collapsed: Set<string>,
): string {
  const cards = collections
    .map((c, ci) => {
      const isCollapsed = collapsed.has(c.templateCode);
      const thumbs = isCollapsed
        ? ""
        : renderThumbnails(c, ci);
      return (
        `<article class="collection${isCollapsed ? " collapsed" : ""}"` +
        ` data-code="${esc(c.templateCode)}" data-intent="${esc(c.intent)}">` +
        `<header><h3>${esc(c.objective)}</h3>` +
        `<button class="add-all" data-collection="${ci}" title="Add all to canvas">+</button>` +
        `<button class="collapse" data-code="${esc(c.templateCode)}">▸</button>` +
        `</header>${thumbs}</article>`
      );
    })
    .join("");
  return `<section class="collection-browser">${cards}</section>`;
}

function renderThumbnails(c: RankedCollection, ci: number): string {
  const views = c.views
    .map(
      (v, vi) =>
        `<figure class="thumbnail view" data-collection="${ci}" data-view="${vi}"` +
        ` title="${esc(v.chartKind)}: ${esc(Object.values(v.attrs).join(", "))}">` +
        `<span class="kind">${esc(v.chartKind)}</span></figure>`,
    )
    .join("");
  const widgets = c.widgets
    .map(
      (w, wi) =>
        `<figure class="thumbnail widget" data-collection="${ci}" data-widget="${wi}"` +
        ` title="${esc(w.widgetKind)}: ${esc(w.attr)}">` +
        `<span class="kind">${esc(w.widgetKind)}</span></figure>`,
    )
    .join("");
  return `<div class="thumbnails">${views}${widgets}</div>`;
}

export function renderCanvas(elements: CanvasElement[]): string {
  const items = elements
    .map((e) => {
      const kind = isViewSpec(e.spec) ? e.spec.chartKind : e.spec.widgetKind;
      const g = e.geometry;
      return (
        `<div class="element" data-id="${esc(e.id)}" data-kind="${esc(kind)}"` +
        ` style="grid-column:${g.x + 1}/span ${g.w};grid-row:${g.y + 1}/span ${g.h}">` +
        `<button class="link-icon" data-source="${esc(e.id)}">⧉</button>` +
        `<button class="remove" data-id="${esc(e.id)}">×</button>` +
        `<div class="chart" data-id="${esc(e.id)}"></div></div>`
      );
    })
    .join("");
  return (
    `<section class="canvas">` +
    `<button class="update-recommendations">Update Recommendations</button>` +
    `<div class="grid">${items}</div></section>`
  );
}

export function renderLinkOverlay(overlay: LinkOverlay): string {
  const connectors = overlay.targets
    .map((t) => {
      const toggles = t.allowedModes
        .map(
          (m) =>
            `<button class="mode${t.activeMode === m ? " active" : ""}"` +
            ` data-source="${esc(overlay.sourceId)}" data-target="${esc(t.targetId)}"` +
            ` data-mode="${m}">${m}</button>`,
        )
        .join("");
      return (
        `<div class="connector${t.faded ? " faded" : ""}"` +
        ` data-target="${esc(t.targetId)}">${toggles}</div>`
      );
    })
    .join("");
  return (
    `<div class="link-overlay" data-source="${esc(overlay.sourceId)}">` +
    `${connectors}</div>`
  );
}

export function renderApp(store: UiStore): string {
  const overlay =
    store.linkEditSource === null
      ? ""
      : renderLinkOverlay(store.linkOverlay(store.linkEditSource));
  return (
    `<main class="medley">` +
    renderInputPanel(store.attributes, store.selectedAttrs, store.selectedIntents) +
    renderCollectionBrowser(store.collections, store.collapsed) +
    renderCanvas(store.elements) +
    overlay +
    `</main>`
  );
}
