import { Screen, WalkthroughController } from "./controller.js";
import { OutcomeView, VerdictView } from "./types.js";

// Rendering only mirrors what the controller (and through it the server)
// says. Verdict text is shown verbatim from payloads; a provisional outcome
// keeps its verdict text but is styled at TBD severity with a note.

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const element = document.createElement(tag);
  if (className) {
    element.className = className;
  }
  if (text !== undefined) {
    element.textContent = text;
  }
  return element;
}

function badgeSeverity(verdict: VerdictView, provisional: boolean): string {
  if (provisional && (verdict.kind === "PERMITS" || verdict.kind === "DEMANDS")) {
    return "tbd";
  }
  return verdict.kind.toLowerCase();
}

function renderVerdict(verdict: VerdictView, provisional: boolean): HTMLElement {
  const wrap = el("div", "verdict");
  const badge = el("span", `badge badge--${badgeSeverity(verdict, provisional)}`, verdict.kind);
  wrap.appendChild(badge);
  if (provisional) {
    wrap.appendChild(
      el(
        "p",
        "provisional-note",
        "Provisional: a condition on this path cannot be decided yet, so treat the outcome as TBD.",
      ),
    );
  }
  if (verdict.rationale) {
    wrap.appendChild(el("p", "rationale", verdict.rationale));
  }
  for (const citation of verdict.citations) {
    wrap.appendChild(el("p", "citation", `see: ${citation}`));
  }
  return wrap;
}

function renderBreadcrumb(controller: WalkthroughController): HTMLElement {
  const trail = el("ol", "breadcrumb");
  for (const step of controller.breadcrumb) {
    const item = el("li");
    item.appendChild(el("span", "crumb-prompt", step.prompt));
    item.appendChild(el("span", "crumb-answer", step.answer));
    trail.appendChild(item);
  }
  return trail;
}

function renderOutcome(outcome: OutcomeView): HTMLElement {
  const card = el("section", "outcome");
  card.appendChild(el("h3", undefined, outcome.tree));
  card.appendChild(renderVerdict(outcome.verdict, outcome.provisional));
  return card;
}

function renderScreen(root: HTMLElement, controller: WalkthroughController, screen: Screen): void {
  root.replaceChildren();
  switch (screen.kind) {
    case "loading":
      root.appendChild(el("p", "loading", "loading..."));
      return;

    case "failure": {
      const banner = el("div", "error-banner");
      banner.appendChild(el("p", undefined, `Request failed: ${screen.message}`));
      const retry = el("button", "retry", "Retry");
      retry.onclick = () => void controller.retry();
      banner.appendChild(retry);
      root.appendChild(banner);
      return;
    }

    case "picker": {
      root.appendChild(el("h2", undefined, "Pick a guideline to walk"));
      const list = el("div", "guideline-list");
      for (const guideline of screen.guidelines) {
        const button = el("button", "guideline", guideline.name);
        button.onclick = () => void controller.pick(guideline.name);
        const card = el("div", "guideline-card");
        card.appendChild(button);
        card.appendChild(el("p", "subclasses", guideline.subclasses.join(" · ")));
        list.appendChild(card);
      }
      root.appendChild(list);
      if (screen.completed.length > 0) {
        root.appendChild(
          el("p", "completed-note", `completed: ${screen.completed.map((c) => c.tree).join(", ")}`),
        );
        const summary = el("button", "summary", "Show summary report");
        summary.onclick = () => void controller.showSummary();
        root.appendChild(summary);
      }
      return;
    }

    case "walk": {
      const { state } = screen;
      root.appendChild(el("h2", undefined, state.tree));
      root.appendChild(renderBreadcrumb(controller));
      if (state.verdict) {
        root.appendChild(renderVerdict(state.verdict, state.provisional));
        const done = el("button", "done", "Record and pick another tree");
        done.onclick = () => void controller.finishWalk();
        root.appendChild(done);
      } else if (state.node) {
        root.appendChild(el("p", "prompt", state.node.prompt));
        if (state.node.kind === "xor") {
          root.appendChild(el("p", "xor-note", "Exactly one of these applies:"));
        }
        const answers = el("div", "answers");
        for (const label of state.node.labels) {
          const button = el("button", "answer", label);
          button.onclick = () => void controller.answer(label);
          answers.appendChild(button);
        }
        root.appendChild(answers);
      }
      if (screen.inlineError) {
        root.appendChild(el("p", "inline-error", screen.inlineError));
      }
      const undoButton = el("button", "undo", "Undo");
      undoButton.disabled = state.path.length === 0;
      undoButton.onclick = () => void controller.undo();
      root.appendChild(undoButton);
      return;
    }

    case "summary": {
      root.appendChild(el("h2", undefined, "Summary"));
      const overall = el("div", "overall");
      overall.appendChild(
        el("span", `badge badge--${screen.report.overall.toLowerCase()}`, screen.report.overall),
      );
      root.appendChild(overall);
      for (const outcome of screen.report.outcomes) {
        root.appendChild(renderOutcome(outcome));
      }
      if (screen.report.obligations.length > 0) {
        root.appendChild(el("h3", undefined, "Obligations"));
        const list = el("ul", "obligations");
        for (const obligation of screen.report.obligations) {
          list.appendChild(el("li", undefined, obligation));
        }
        root.appendChild(list);
      }
      const back = el("button", "back", "Back to guidelines");
      back.onclick = () => void controller.start();
      root.appendChild(back);
      return;
    }
  }
}

export function mount(root: HTMLElement, controller: WalkthroughController): void {
  controller.subscribe((screen) => renderScreen(root, controller, screen));
}
