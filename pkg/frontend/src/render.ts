import { percentFromDecimal, pluralRounds } from "./format.js";
import type { AdvisorStore, SessionState, State } from "./store.js";
import type { OptionEntry } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: Array<Node | string> = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

const BANNERS = {
  winner: "You made it out a winner!",
  loser: "Bankroll gone - the casino keeps you.",
  deadline: "Deadline expired with the debt unpaid.",
} as const;

function renderSetup(state: State & { phase: "setup" }, store: AdvisorStore): HTMLElement {
  const fields: Array<[string, string, string]> = [
    ["p", "Round-win probability p", "3/5"],
    ["goal", "Exit capital N", "4"],
    ["horizon", "Deadline T (rounds)", "2"],
    ["capital", "Current bankroll", "1"],
  ];
  const form = el("form", { "data-testid": "setup-form", class: "setup" });
  const inputs: Record<string, HTMLInputElement> = {};
  for (const [name, label, placeholder] of fields) {
    const input = el("input", {
      name,
      placeholder,
      "data-testid": `input-${name}`,
    });
    inputs[name] = input;
    const row = el("label", { class: "field" }, [label, input]);
    if (state.error && state.error.field === name) {
      row.append(
        el("span", { class: "error", "data-testid": `error-${name}` }, [
          state.error.message,
        ]),
      );
    }
    form.append(row);
  }
  if (state.error && !(state.error.field in inputs)) {
    form.append(
      el("div", { class: "error", "data-testid": "error-form" }, [
        state.error.message,
      ]),
    );
  }
  const submit = el("button", { type: "submit", "data-testid": "start" }, [
    state.pending ? "Starting..." : "Start session",
  ]);
  if (state.pending) submit.setAttribute("disabled", "");
  form.append(submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void store.startSession({
      p: inputs.p.value,
      goal: inputs.goal.value,
      horizon: inputs.horizon.value,
      capital: inputs.capital.value,
    });
  });
  return form;
}

function renderWhatIf(state: SessionState, store: AdvisorStore): HTMLElement {
  const panel = el("section", { class: "whatif", "data-testid": "whatif" });
  panel.append(el("h2", {}, ["What if I stake..."]));
  const options = state.options?.options ?? [];
  if (options.length === 0) {
    panel.append(el("p", {}, ["Loading stake options..."]));
    return panel;
  }
  const selected =
    options.find((o) => o.stake === state.selectedStake) ??
    options.find((o) => o.stake === state.options?.recommended_stake) ??
    options[0];

  if (options.length === 1) {
    panel.append(
      el("p", { "data-testid": "whatif-single" }, [
        `Only one admissible stake: ${options[0].stake}`,
      ]),
    );
  } else {
    const slider = el("input", {
      type: "range",
      min: String(options[0].stake),
      max: String(options[options.length - 1].stake),
      step: "1",
      value: String(selected.stake),
      "data-testid": "whatif-slider",
    });
    slider.addEventListener("input", () => {
      store.selectStake(Number(slider.value));
    });
    panel.append(slider);
  }
  const readout = (option: OptionEntry) =>
    `stake ${option.stake}: survival ${percentFromDecimal(option.survival_decimal)}` +
    (option.optimal ? " (optimal)" : "");
  panel.append(
    el("p", { "data-testid": "whatif-readout" }, [readout(selected)]),
  );
  const list = el("ul", { class: "options" });
  for (const option of options) {
    const item = el(
      "li",
      {
        "data-testid": `option-${option.stake}`,
        class: option.optimal ? "optimal" : "",
      },
      [readout(option)],
    );
    list.append(item);
  }
  panel.append(list);
  return panel;
}

function renderSession(state: SessionState, store: AdvisorStore): HTMLElement {
  const { view } = state;
  const root = el("div", { class: "session" });
  root.append(
    el("header", {}, [
      el("h1", {}, [`Goal $${view.N} at p = ${view.p}`]),
      el("p", { "data-testid": "rounds-left" }, [
        view.status === "active"
          ? `${pluralRounds(view.remaining)} left, bankroll $${view.capital}`
          : `finished after ${pluralRounds(view.rounds_played)}, bankroll $${view.capital}`,
      ]),
    ]),
  );
  if (view.warning) {
    root.append(el("p", { class: "warning", "data-testid": "warning" }, [view.warning]));
  }

  if (view.status !== "active") {
    root.append(
      el("div", { class: `banner ${view.status}`, "data-testid": "banner" }, [
        BANNERS[view.status],
      ]),
    );
  } else {
    const survival = percentFromDecimal(view.survival_decimal ?? "0");
    const gauge = el("section", { class: "gauge" }, [
      el("div", { "data-testid": "survival", class: "big" }, [survival]),
      el("div", { class: "bar" }, [
        el("div", {
          class: "fill",
          style: `width: ${survival.slice(0, -1)}%`,
        }),
      ]),
      el("p", {}, ["chance of paying the debt in time under optimal play"]),
    ]);
    root.append(gauge);
    root.append(
      el("p", { "data-testid": "recommended-stake", class: "recommend" }, [
        `Recommended stake: $${view.recommended_stake ?? "-"}`,
      ]),
    );
    root.append(renderWhatIf(state, store));

    const stakeValue =
      state.selectedStake ?? view.recommended_stake ?? 1;
    const override = el("input", {
      type: "number",
      value: String(stakeValue),
      min: "1",
      "data-testid": "stake-override",
    });
    const play = (result: "win" | "lose") => () => {
      const stake = Number(override.value);
      void store.submitOutcome(
        result,
        stake === view.recommended_stake ? undefined : stake,
      );
    };
    const winButton = el("button", { "data-testid": "report-win" }, ["Won the round"]);
    const loseButton = el("button", { "data-testid": "report-lose" }, ["Lost the round"]);
    winButton.addEventListener("click", play("win"));
    loseButton.addEventListener("click", play("lose"));
    if (state.pending) {
      winButton.setAttribute("disabled", "");
      loseButton.setAttribute("disabled", "");
    }
    root.append(
      el("section", { class: "round-panel", "data-testid": "round-panel" }, [
        el("label", {}, ["Stake actually played", override]),
        winButton,
        loseButton,
      ]),
    );
  }

  if (state.error) {
    root.append(el("p", { class: "error", "data-testid": "session-error" }, [state.error]));
  }

  const history = el("table", { class: "history", "data-testid": "history" });
  history.append(
    el("tr", {}, ["round", "before", "stake", "result", "after"].map((h) => el("th", {}, [h]))),
  );
  for (const row of view.history) {
    history.append(
      el("tr", {}, [
        el("td", {}, [String(row.round)]),
        el("td", {}, [`$${row.capital_before}`]),
        el("td", {}, [`$${row.stake}`]),
        el("td", {}, [row.result]),
        el("td", {}, [`$${row.capital_after}`]),
      ]),
    );
  }
  root.append(history);

  const again = el("button", { "data-testid": "new-session" }, ["New session"]);
  again.addEventListener("click", () => store.reset());
  root.append(again);
  return root;
}

export function render(container: HTMLElement, state: State, store: AdvisorStore): void {
  container.replaceChildren(
    state.phase === "setup" ? renderSetup(state, store) : renderSession(state, store),
  );
}

export function mount(container: HTMLElement, store: AdvisorStore): void {
  render(container, store.getState(), store);
  store.subscribe((state) => render(container, state, store));
}
