import { ApiClient } from "./client.js";
import { buildQueryView, SessionView } from "./types.js";
import { renderError, renderModel, renderQuery, renderStatus } from "./view.js";

/**
 * Wires a session into a container element.  No optimistic updates: every
 * click posts the answer and re-renders from the server's response, so the
 * displayed query is always the service's pending query.
 */
export function mount(root: HTMLElement, client: ApiClient, initial: SessionView): void {
  let view = initial;

  const rerender = async (): Promise<void> => {
    if (view.status === "awaiting") {
      root.innerHTML = renderQuery(buildQueryView(view));
      root.querySelectorAll<HTMLButtonElement>("[data-choice]").forEach((btn) => {
        btn.addEventListener("click", () => onChoice(btn));
      });
    } else if (view.status === "done") {
      const { model, dot } = await client.getModel(view.id);
      root.innerHTML = renderModel(model, dot);
    } else {
      root.innerHTML = renderStatus(view.status) + (view.error ? renderError(view.error) : "");
    }
  };

  const onChoice = async (btn: HTMLButtonElement): Promise<void> => {
    const seq = Number(btn.dataset.seq);
    const choice = btn.dataset.choice as "first" | "second" | "unknown";
    const result = await client.submitAnswer(view.id, seq, choice);
    if (result.error) {
      root.insertAdjacentHTML("beforeend", renderError(result.error));
      return;
    }
    if (result.view === null) {
      return; // stale sequence number: duplicate click, ignore
    }
    view = result.view;
    await rerender();
  };

  void rerender();
}

export async function start(root: HTMLElement, baseUrl: string): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const client = new ApiClient(baseUrl);
  const view = await client.createSession({
    n: Number(params.get("n") ?? 3),
    k: Number(params.get("k") ?? 1),
    learner: (params.get("learner") ?? "tree") as "tree" | "kbounded",
    mode: (params.get("mode") ?? "complete") as "complete" | "incomplete",
  });
  mount(root, client, view);
}
