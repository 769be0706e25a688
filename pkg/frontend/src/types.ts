// Wire types mirrored from the session service's JSON responses.

export interface PendingSwap {
  first: number[];
  second: number[];
  swapped: number;
  names: string[];
  value_names: string[][];
}

export interface SessionView {
  id: string;
  status: "learning" | "awaiting" | "done" | "aborted" | "failed";
  mode: "complete" | "incomplete";
  answered: number;
  bound: number;
  pending: PendingSwap | null;
  error: string | null;
  model?: ModelJson;
}

export interface CptRowJson {
  context: number[];
  order: number[] | null;
}

export interface CptJson {
  variable: number;
  parents: number[];
  rows: CptRowJson[];
}

export interface ModelJson {
  n: number;
  m: number;
  k: number;
  cpts: CptJson[];
}

export interface ModelResponse {
  model: ModelJson;
  dot: string;
}

export type Choice = "first" | "second" | "unknown";

/** One rendered question: two outcome cards differing in one attribute. */
export interface QueryView {
  sessionId: string;
  cards: [Record<string, string>, Record<string, string>];
  highlighted: string;
  answered: number;
  bound: number;
  allowUnknown: boolean;
}

export function buildQueryView(view: SessionView): QueryView {
  const pending = view.pending;
  if (!pending) {
    throw new Error(`session ${view.id} has no pending query`);
  }
  const card = (outcome: number[]): Record<string, string> => {
    const entries: Record<string, string> = {};
    pending.names.forEach((name, i) => {
      entries[name] = pending.value_names[i][outcome[i]];
    });
    return entries;
  };
  const cards: [Record<string, string>, Record<string, string>] = [
    card(pending.first),
    card(pending.second),
  ];
  const highlighted = pending.names[pending.swapped];
  // sanity: the two cards may differ only in the highlighted attribute
  for (const name of pending.names) {
    if (name !== highlighted && cards[0][name] !== cards[1][name]) {
      throw new Error(`cards differ in non-swapped attribute ${name}`);
    }
  }
  if (cards[0][highlighted] === cards[1][highlighted]) {
    throw new Error("cards do not differ in the swapped attribute");
  }
  return {
    sessionId: view.id,
    cards,
    highlighted,
    answered: view.answered,
    bound: view.bound,
    allowUnknown: view.mode === "incomplete",
  };
}
