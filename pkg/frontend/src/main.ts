// Page wiring: load env + plan, maintain the query draft, submit, render
// verdicts, adopt repaired queries. At most one submission is in flight;
// stale responses are dropped by token.

import { ApiClient, EnvInfo, ServiceError } from "./api.js";
import {
  DraftItem,
  canonicalText,
  moveItem,
  parseQueryText,
  toggleAgent,
  validateDraft,
} from "./model.js";
import { renderAnswer, renderDraft, renderError, renderPlanTable } from "./render.js";

const api = new ApiClient("");

let env: EnvInfo;
let draft: DraftItem[] = [];
let requestToken = 0;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function refreshDraft(): void {
  const problems = validateDraft(
    draft,
    env.numAgents,
    env.tasks.map((t) => t.name)
  );
  el("draft-box").innerHTML = renderDraft(draft, env, problems);
  el("canonical").textContent = draft.length ? canonicalText(draft) : "";
  const submit = el<HTMLButtonElement>("submit");
  submit.disabled = draft.length === 0 || problems.length > 0;
}

function addTask(task: string): void {
  draft = [...draft, { task, coalition: [] }];
  refreshDraft();
}

function onDraftClick(event: Event): void {
  const target = event.target as HTMLElement;
  const action = target.dataset.action;
  if (!action) {
    return;
  }
  const index = parseInt(target.dataset.index ?? "-1", 10);
  if (action === "up") {
    draft = moveItem(draft, index, -1);
  } else if (action === "down") {
    draft = moveItem(draft, index, 1);
  } else if (action === "remove") {
    draft = draft.filter((_item, i) => i !== index);
  } else if (action === "toggle") {
    const agent = parseInt(target.dataset.agent ?? "0", 10);
    draft = draft.map((item, i) => (i === index ? toggleAgent(item, agent) : item));
  }
  refreshDraft();
}

async function submit(): Promise<void> {
  const token = ++requestToken;
  const button = el<HTMLButtonElement>("submit");
  button.disabled = true;
  el("result").innerHTML = `<p class="hint">Checking&hellip;</p>`;
  try {
    const answer = await api.postQuery(canonicalText(draft));
    if (token !== requestToken) {
      return; // a newer submission superseded this one
    }
    el("result").innerHTML = renderAnswer(answer, env);
    const adopt = document.getElementById("adopt");
    if (adopt) {
      adopt.addEventListener("click", () => {
        draft = parseQueryText(adopt.dataset.query ?? "");
        refreshDraft();
        el("result").innerHTML = "";
      });
    }
  } catch (error) {
    if (token !== requestToken) {
      return;
    }
    if (error instanceof ServiceError) {
      el("result").innerHTML = renderError(error.body.error, error.body.detail);
    } else {
      el("result").innerHTML = renderError("ConnectionError", String(error));
    }
  } finally {
    if (token === requestToken) {
      refreshDraft();
    }
  }
}

async function boot(): Promise<void> {
  env = await api.getEnv();
  const picker = el("task-picker");
  picker.innerHTML = env.tasks
    .map(
      (task) =>
        `<button class="add-task" data-task="${task.name}">+ ${task.name}</button>`
    )
    .join(" ");
  picker.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset.task) {
      addTask(target.dataset.task);
    }
  });
  el("draft-box").addEventListener("click", onDraftClick);
  el("draft-box").addEventListener("change", onDraftClick);
  el("submit").addEventListener("click", () => void submit());
  try {
    const plan = await api.getPlan();
    el("plan-box").innerHTML = renderPlanTable(plan, env);
  } catch (error) {
    el("plan-box").innerHTML = renderError(
      "NoPlan",
      error instanceof ServiceError ? error.body.detail : String(error)
    );
  }
  refreshDraft();
}

void boot();
