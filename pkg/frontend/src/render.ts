// Pure HTML renderers; main.ts wires them to the DOM, tests inspect the
// strings directly.

import type { EnvInfo, Failure, PlanInfo, QueryAnswer, WitnessEdge } from "./api.js";
import type { DraftItem, DraftProblem } from "./model.js";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function agentLabel(env: EnvInfo, id: number): string {
  const agent = env.agents.find((a) => a.id === id);
  return agent ? agent.display : `r${id}`;
}

export function renderPlanTable(plan: PlanInfo, env: EnvInfo): string {
  const header = plan.columns
    .map((_c, index) => `<th>${index + 1}</th>`)
    .join("");
  const rows = plan.agents
    .map((agentId) => {
      const cells = plan.columns
        .map((column) => {
          const event = column.find((ev) => ev.coalition.includes(agentId));
          return `<td class="${event ? "busy" : "idle"}">${
            event ? esc(event.task) : "&middot;"
          }</td>`;
        })
        .join("");
      return `<tr><th>${esc(agentLabel(env, agentId))}</th>${cells}</tr>`;
    })
    .join("");
  return `<table class="plan"><thead><tr><th></th>${header}</tr></thead><tbody>${rows}</tbody></table>`;
}

export function renderDraft(
  items: DraftItem[],
  env: EnvInfo,
  problems: DraftProblem[]
): string {
  if (items.length === 0) {
    return `<p class="hint">No items yet. Pick a task above to start an alternative plan.</p>`;
  }
  const byIndex = new Map<number, string[]>();
  for (const problem of problems) {
    if (problem.index !== null) {
      const list = byIndex.get(problem.index) ?? [];
      list.push(problem.message);
      byIndex.set(problem.index, list);
    }
  }
  const rows = items
    .map((item, index) => {
      const checkboxes = env.agents
        .map(
          (agent) => `<label class="agent">
            <input type="checkbox" data-action="toggle" data-index="${index}"
              data-agent="${agent.id}" ${
            item.coalition.includes(agent.id) ? "checked" : ""
          }/> ${esc(agent.display)}</label>`
        )
        .join("");
      const issues = byIndex.get(index);
      return `<li class="draft-item${issues ? " invalid" : ""}" data-index="${index}">
        <span class="order">${index + 1}.</span>
        <span class="task">${esc(item.task)}</span>
        <span class="agents">${checkboxes}</span>
        <span class="controls">
          <button data-action="up" data-index="${index}" title="earlier">&uarr;</button>
          <button data-action="down" data-index="${index}" title="later">&darr;</button>
          <button data-action="remove" data-index="${index}" title="remove">&times;</button>
        </span>
        ${issues ? `<span class="issue">${esc(issues.join("; "))}</span>` : ""}
      </li>`;
    })
    .join("");
  return `<ol class="draft">${rows}</ol>`;
}

export function renderWitness(witness: WitnessEdge[], env: EnvInfo): string {
  if (witness.length === 0) {
    return `<p class="feasible-note">The empty query holds trivially.</p>`;
  }
  const steps = witness
    .flatMap((edge) => edge.events)
    .map(
      (event, index) => `<li class="timeline-step">
        <span class="order">${index + 1}</span>
        <span class="task">${esc(event.task)}</span>
        <span class="who">${event.coalition
          .map((id) => esc(agentLabel(env, id)))
          .join(" + ")}</span>
      </li>`
    )
    .join("");
  return `<ol class="timeline">${steps}</ol>`;
}

export function renderFailureCard(failure: Failure, env: EnvInfo): string {
  const sentences = failure.clauses
    .map((clause) => `<p class="sentence ${clause.kind}">${esc(clause.text)}</p>`)
    .join("");
  const coalition = failure.coalition
    .map((id) => esc(agentLabel(env, id)))
    .join(" + ");
  const badges = [
    failure.removed ? `<span class="badge removed">removed</span>` : "",
    failure.flagged ? `<span class="badge flagged">flagged</span>` : "",
  ].join("");
  return `<div class="card failure-card">
    <h3>Failure: ${esc(failure.task)} <small>(${coalition})</small>${badges}</h3>
    ${sentences}
  </div>`;
}

export function renderAnswer(answer: QueryAnswer, env: EnvInfo): string {
  if (answer.verdict === "feasible") {
    return `<div class="verdict feasible"><h2>FEASIBLE</h2>
      ${renderWitness(answer.witness ?? [], env)}</div>`;
  }
  const report = answer.report!;
  const cards = report.failures
    .map((failure) => renderFailureCard(failure, env))
    .join("");
  return `<div class="verdict infeasible"><h2>INFEASIBLE</h2>
    ${cards}
    <div class="repair">
      <p>Closest feasible query:</p>
      <code id="repaired-query">${esc(report.finalQuery)}</code>
      <button id="adopt" data-query="${esc(report.finalQuery)}">Adopt repaired query</button>
    </div>
  </div>`;
}

export function renderError(error: string, detail: string): string {
  return `<div class="verdict error"><h2>${esc(error)}</h2><p>${esc(
    detail
  )}</p></div>`;
}
