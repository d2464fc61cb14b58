/** Browser entry point: wires DOM events to the store and re-renders.
 *
 * No top-level side effects — call mount() from the host page, e.g.
 *   mount(document.getElementById("app")!, new UiStore(new ApiClient("/api")), datasetId)
 */

import { ApiClient } from "./api.js";
import { renderApp } from "./render.js";
import { UiStore } from "./state.js";

export { ApiClient, UiStore, renderApp };
export * from "./types.js";

export async function mount(
  root: HTMLElement,
  store: UiStore,
  datasetId: string,
): Promise<void> {
  await store.init(datasetId);
  const rerender = () => {
    root.innerHTML = renderApp(store);
  };
  rerender();

  root.addEventListener("click", (ev) => {
    const el = ev.target as HTMLElement;
    void handleClick(el, store).then((changed) => {
      if (changed) rerender();
    });
  });

  root.addEventListener("dblclick", (ev) => {
    const fig = (ev.target as HTMLElement).closest<HTMLElement>("figure.thumbnail");
    if (!fig) return;
    const collection = store.collections[Number(fig.dataset.collection)];
    if (!collection) return;
    const spec =
      fig.dataset.view !== undefined
        ? collection.views[Number(fig.dataset.view)]
        : collection.widgets[Number(fig.dataset.widget)];
    if (!spec) return;
    void store.addToCanvas(spec).then(rerender);
  });

  root.addEventListener("mouseover", (ev) => {
    const fig = (ev.target as HTMLElement).closest<HTMLElement>("figure.thumbnail");
    store.setHover(fig?.title ?? null);
  });
}

async function handleClick(el: HTMLElement, store: UiStore): Promise<boolean> {
  const attr = el.closest<HTMLElement>("li.attr");
  if (attr?.dataset.attr) {
    await store.toggleAttr(attr.dataset.attr);
    return true;
  }
  const intent = el.closest<HTMLElement>("li.intent");
  if (intent?.dataset.intent) {
    await store.toggleIntent(intent.dataset.intent);
    return true;
  }
  if (el.matches("button.collapse") && el.dataset.code) {
    store.toggleCollapsed(el.dataset.code);
    return true;
  }
  if (el.matches("button.add-all")) {
    const collection = store.collections[Number(el.dataset.collection)];
    if (collection) await store.addCollection(collection);
    return true;
  }
  if (el.matches("button.remove") && el.dataset.id) {
    await store.removeElement(el.dataset.id);
    return true;
  }
  if (el.matches("button.link-icon") && el.dataset.source) {
    await store.openLinkOverlay(el.dataset.source);
    return true;
  }
  if (el.matches("button.mode") && el.dataset.source && el.dataset.target) {
    await store.setLinkMode(
      el.dataset.source,
      el.dataset.target,
      el.dataset.mode as "highlight" | "filter",
    );
    return true;
  }
  if (el.matches("button.update-recommendations")) {
    await store.updateRecommendations();
    return true;
  }
  return false;
}
