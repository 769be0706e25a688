import { ModelJson, QueryView } from "./types.js";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function card(
  entries: Record<string, string>,
  highlighted: string,
  which: "first" | "second",
  seq: number
): string {
  const rows = Object.entries(entries)
    .map(([name, value]) => {
      const cls = name === highlighted ? ' class="highlight"' : "";
      return `<tr${cls}><th>${esc(name)}</th><td>${esc(value)}</td></tr>`;
    })
    .join("");
  return (
    `<button class="card" data-choice="${which}" data-seq="${seq}">` +
    `<table>${rows}</table></button>`
  );
}

/** Two side-by-side outcome cards plus progress and the optional don't-know button. */
export function renderQuery(view: QueryView): string {
  const seq = view.answered;
  const unknown = view.allowUnknown
    ? `<button class="unknown" data-choice="unknown" data-seq="${seq}">I don't know</button>`
    : "";
  return `
<div class="query" data-session="${esc(view.sessionId)}">
  <p class="prompt">Which do you prefer? (they differ in <b>${esc(view.highlighted)}</b>)</p>
  <div class="cards">
    ${card(view.cards[0], view.highlighted, "first", seq)}
    ${card(view.cards[1], view.highlighted, "second", seq)}
  </div>
  ${unknown}
  <p class="progress">answered ${view.answered} of at most ${view.bound}</p>
</div>`;
}

function rowLabel(context: number[], parents: number[], names: string[], values: string[][]): string {
  if (parents.length === 0) {
    return "always";
  }
  return parents.map((p, i) => `${names[p]}=${values[p][context[i]]}`).join(", ");
}

/** Dependency graph (inline DOT) with one preference table per variable. */
export function renderModel(model: ModelJson, dot: string, names?: string[], valueNames?: string[][]): string {
  const varNames = names ?? Array.from({ length: model.n }, (_, i) => `x${i}`);
  const values =
    valueNames ?? varNames.map(() => Array.from({ length: model.m }, (_, w) => String(w)));
  const tables = model.cpts
    .map((cpt) => {
      const rows = cpt.rows
        .map((row) => {
          const order =
            row.order === null
              ? "<i>no preference</i>"
              : row.order.map((w) => esc(values[cpt.variable][w])).join(" &succ; ");
          return `<tr><td>${esc(rowLabel(row.context, cpt.parents, varNames, values))}</td><td>${order}</td></tr>`;
        })
        .join("");
      return `<div class="cpt"><h3>${esc(varNames[cpt.variable])}</h3><table>${rows}</table></div>`;
    })
    .join("");
  return `
<div class="model">
  <h2>Learned preference model</h2>
  <pre class="dot">${esc(dot)}</pre>
  <div class="tables">${tables}</div>
</div>`;
}

export function renderError(message: string): string {
  return `<p class="error">${esc(message)}</p>`;
}

export function renderStatus(status: string): string {
  return `<p class="status">session ${esc(status)}</p>`;
}
