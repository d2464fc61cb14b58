/** Renderer output: string assertions, no DOM required. */

import { describe, expect, it } from "vitest";
import {
  renderCanvas,
  renderCollectionBrowser,
  renderInputPanel,
  renderLinkOverlay,
} from "../src/render.js";
import type { Attribute, CanvasElement, RankedCollection } from "../src/types.js";

const ATTRS: Attribute[] = [
  { name: "Sales", attrType: "quantitative", cardinality: 0, columnIndex: 0, missingCount: 0 },
  { name: "State", attrType: "geographic", cardinality: 5, columnIndex: 1, missingCount: 0 },
  { name: "Date", attrType: "temporal", cardinality: 0, columnIndex: 2, missingCount: 0 },
];

function collection(code: string): RankedCollection {
  return {
    templateCode: code,
    intent: "measureAnalysis",
    objective: `Overview of Sales & <friends>`,
    assignment: { Q: "Sales" },
    views: [
      { chartKind: "bar", attrs: { measure: "Sales", dimension: "State" }, aggFn: "sum" },
    ],
    widgets: [{ widgetKind: "yearPicker", attr: "Date" }],
    primaryAttrs: ["Sales"],
    meanInterestingness: 0.5,
    scores: {
      relevance: 1,
      attrMatch: 1,
      coverage: 0,
      explicitMatch: 1,
      meanInterestingness: 0.5,
    },
    viewSpecs: [{}],
    widgetSpecs: [{}],
  };
}

describe("input panel", () => {
  it("shows type icons and marks selections", () => {
    const html = renderInputPanel(ATTRS, ["Sales"], ["changeAnalysis"]);
    expect(html).toContain(`<span class="type-icon type-quantitative">Q</span>`);
    expect(html).toContain(`<span class="type-icon type-geographic">G</span>`);
    expect(html).toContain(`class="attr selected" data-attr="Sales"`);
    expect(html).toContain(`class="intent selected" data-intent="changeAnalysis"`);
    expect(html).toContain(`class="intent" data-intent="measureAnalysis"`);
  });
});

describe("collection browser", () => {
  it("renders objective, add-all button, and thumbnails", () => {
    const html = renderCollectionBrowser([collection("M1")], new Set());
    expect(html).toContain("Overview of Sales &amp; &lt;friends&gt;");
    expect(html).toContain(`button class="add-all" data-collection="0"`);
    expect(html).toContain(`data-collection="0" data-view="0"`);
    expect(html).toContain(`data-collection="0" data-widget="0"`);
    expect(html).toContain(`title="bar: Sales, State"`);
  });

  it("hides thumbnails for collapsed collections", () => {
    const html = renderCollectionBrowser([collection("M1")], new Set(["M1"]));
    expect(html).toContain(`class="collection collapsed"`);
    expect(html).not.toContain("thumbnail");
  });
});

describe("canvas", () => {
  it("places elements on the grid with link and remove controls", () => {
    const elements: CanvasElement[] = [
      {
        id: "e1",
        spec: { chartKind: "map", attrs: { measure: "Sales", geo: "State" }, aggFn: "sum" },
        geometry: { x: 2, y: 1, w: 4, h: 3 },
      },
    ];
    const html = renderCanvas(elements);
    expect(html).toContain(`data-id="e1" data-kind="map"`);
    expect(html).toContain("grid-column:3/span 4;grid-row:2/span 3");
    expect(html).toContain(`button class="link-icon" data-source="e1"`);
    expect(html).toContain(`button class="remove" data-id="e1"`);
    expect(html).toContain("Update Recommendations");
  });
});

describe("link overlay", () => {
  it("fades invalid targets and marks the active mode", () => {
    const html = renderLinkOverlay({
      sourceId: "e1",
      targets: [
        { targetId: "e2", faded: false, allowedModes: ["highlight", "filter"], activeMode: "highlight" },
        { targetId: "e3", faded: true, allowedModes: [], activeMode: null },
      ],
    });
    expect(html).toContain(`class="connector" data-target="e2"`);
    expect(html).toContain(`class="connector faded" data-target="e3"`);
    expect(html).toContain(`class="mode active"`);
    expect(html).toContain(`data-mode="filter"`);
  });
});
