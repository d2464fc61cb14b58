/** UI state store for the dashboard-composition companion.
 *
 * Mirrors the server session after every acknowledged mutation. Mutations
 * run one at a time (a promise queue serializes them); reads may race
 * mutations safely because every GET is idempotent. Canvas edits apply
 * optimistically and reconcile to the server's answer — on error the edit
 * rolls back to the last server-acknowledged state.
 */

import type { ApiClient } from "./api.js";
import type {
  Attribute,
  CanvasElement,
  Effect,
  Geometry,
  Link,
  LinkMode,
  RankedCollection,
  ViewSpec,
  WidgetSpec,
} from "./types.js";

export interface LinkOverlayTarget {
  targetId: string;
  /** Invalid link targets render faded to signal "no interaction possible". */
  faded: boolean;
  allowedModes: LinkMode[];
  activeMode: LinkMode | null;
}

export interface LinkOverlay {
  sourceId: string;
  targets: LinkOverlayTarget[];
}

export const INTENTS = [
  "measureAnalysis",
  "changeAnalysis",
  "categoryAnalysis",
  "distributionAnalysis",
] as const;

export class UiStore {
  sessionId = "";
  attributes: Attribute[] = [];
  selectedAttrs: string[] = [];
  selectedIntents: string[] = [];
  collections: RankedCollection[] = [];
  diagnostics: string[] = [];
  elements: CanvasElement[] = [];
  links: Link[] = [];
  collapsed = new Set<string>();
  hoverTarget: string | null = null;
  /** Element whose link overlay is open, or null when the overlay is closed. */
  linkEditSource: string | null = null;

  private queue: Promise<unknown> = Promise.resolve();

  constructor(private readonly api: ApiClient) {}

  /** Serialize mutations: at most one in flight per session. */
  private enqueue<T>(op: () => Promise<T>): Promise<T> {
    const next = this.queue.then(op, op);
    this.queue = next.catch(() => undefined);
    return next;
  }

  async init(datasetId: string): Promise<void> {
    const info = await this.api.getDataset(datasetId);
    this.attributes = info.attributes;
    const session = await this.api.createSession(datasetId);
    this.sessionId = session.id;
    await this.refresh();
  }

  async refresh(force = false): Promise<void> {
    const recs = await this.api.getRecommendations(this.sessionId, force);
    this.collections = recs.collections;
    this.diagnostics = recs.diagnostics;
  }

  // ---- input panel ----

  toggleAttr(name: string): Promise<void> {
    return this.enqueue(async () => {
      const next = this.selectedAttrs.includes(name)
        ? this.selectedAttrs.filter((a) => a !== name)
        : [...this.selectedAttrs, name];
      const ack = await this.api.patchInput(this.sessionId, { explicitAttrs: next });
      this.selectedAttrs = ack.explicitAttrs;
      this.selectedIntents = ack.intents;
      await this.refresh();
    });
  }

  toggleIntent(intent: string): Promise<void> {
    return this.enqueue(async () => {
      const next = this.selectedIntents.includes(intent)
        ? this.selectedIntents.filter((i) => i !== intent)
        : [...this.selectedIntents, intent];
      const ack = await this.api.patchInput(this.sessionId, { intents: next });
      this.selectedAttrs = ack.explicitAttrs;
      this.selectedIntents = ack.intents;
      await this.refresh();
    });
  }

  // ---- collection browser ----

  toggleCollapsed(templateCode: string): void {
    if (this.collapsed.has(templateCode)) this.collapsed.delete(templateCode);
    else this.collapsed.add(templateCode);
  }

  setHover(target: string | null): void {
    this.hoverTarget = target;
  }

  /** Thumbnail double-click: add one view (or widget) to the canvas. */
  addToCanvas(spec: ViewSpec | WidgetSpec, geometry?: Geometry): Promise<CanvasElement> {
    return this.enqueue(async () => {
      const element = await this.api.addElement(this.sessionId, spec, geometry);
      this.elements = [...this.elements, element];
      await this.syncLinks();
      return element;
    });
  }

  /** Collection-header "+": add every view and widget of a collection. */
  async addCollection(collection: RankedCollection): Promise<CanvasElement[]> {
    const added: CanvasElement[] = [];
    for (const view of collection.views) {
      added.push(await this.addToCanvas(view));
    }
    for (const widget of collection.widgets) {
      added.push(await this.addToCanvas(widget));
    }
    return added;
  }

  // ---- canvas ----

  removeElement(elementId: string): Promise<void> {
    return this.enqueue(async () => {
      const before = this.elements;
      this.elements = this.elements.filter((e) => e.id !== elementId); // optimistic
      try {
        await this.api.deleteElement(this.sessionId, elementId);
      } catch (err) {
        this.elements = before; // reconcile back to server state
        throw err;
      }
      await this.syncLinks();
    });
  }

  moveResize(elementId: string, geometry: Geometry): Promise<void> {
    return this.enqueue(async () => {
      const before = this.elements;
      this.elements = this.elements.map((e) =>
        e.id === elementId ? { ...e, geometry } : e,
      ); // optimistic
      try {
        const ack = await this.api.moveResizeElement(this.sessionId, elementId, geometry);
        this.elements = this.elements.map((e) => (e.id === ack.id ? ack : e));
      } catch (err) {
        this.elements = before; // reconcile back to server state
        throw err;
      }
    });
  }

  /** "Update Recommendations" button. */
  updateRecommendations(): Promise<void> {
    return this.enqueue(() => this.refresh(true));
  }

  // ---- link overlay ----

  private async syncLinks(): Promise<void> {
    this.links = await this.api.getLinks(this.sessionId);
  }

  /** Open the overlay for one element; connectors derive from server links. */
  async openLinkOverlay(sourceId: string): Promise<LinkOverlay> {
    this.linkEditSource = sourceId;
    await this.syncLinks();
    return this.linkOverlay(sourceId);
  }

  closeLinkOverlay(): void {
    this.linkEditSource = null;
  }

  linkOverlay(sourceId: string): LinkOverlay {
    const targets = this.links
      .filter((l) => l.sourceId === sourceId)
      .map((l) => ({
        targetId: l.targetId,
        faded: !l.valid,
        allowedModes: l.allowedModes,
        activeMode: l.activeMode,
      }));
    return { sourceId, targets };
  }

  setLinkMode(sourceId: string, targetId: string, mode: LinkMode): Promise<Link> {
    return this.enqueue(async () => {
      const link = await this.api.setLinkMode(this.sessionId, sourceId, targetId, mode);
      this.links = this.links.map((l) =>
        l.sourceId === link.sourceId && l.targetId === link.targetId ? link : l,
      );
      return link;
    });
  }

  // ---- selection events ----

  /** A click/selection inside a rendered view; effects come from the server. */
  select(sourceId: string, selected: [string, unknown][]): Promise<Effect[]> {
    return this.api.postEvent(this.sessionId, sourceId, selected);
  }

  exportDashboard(format: "json" | "html"): Promise<string> {
    return this.api.exportDashboard(this.sessionId, format);
  }
}
