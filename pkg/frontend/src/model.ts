// Query draft: the ordered items the user assembles. All feasibility
// verdicts come from the API; the client only mirrors cheap validation
// (duplicate tasks, empty coalitions) and the grammar serialization.

export interface DraftItem {
  task: string;
  coalition: number[]; // 1-based agent ids
}

export interface DraftProblem {
  index: number | null;
  message: string;
}

export function canonicalText(items: DraftItem[]): string {
  return items
    .map(
      (item) =>
        `${item.task}:` +
        [...item.coalition]
          .sort((a, b) => a - b)
          .map((id) => `r${id}`)
          .join(",")
    )
    .join(" -> ");
}

export function parseQueryText(text: string): DraftItem[] {
  const trimmed = text.trim();
  if (!trimmed) {
    return [];
  }
  return trimmed.split("->").map((chunk, index) => {
    const [taskPart, agentsPart] = chunk.split(":");
    if (agentsPart === undefined) {
      throw new Error(`item ${index + 1}: expected task:agents`);
    }
    const task = taskPart.trim();
    const coalition = agentsPart
      .split(",")
      .map((token) => token.trim())
      .filter((token) => token.length > 0)
      .map((token) => {
        const match = /^[rR]([0-9]+)$/.exec(token);
        if (!match) {
          throw new Error(`item ${index + 1}: bad agent ${token}`);
        }
        return parseInt(match[1], 10);
      });
    return { task, coalition: [...new Set(coalition)].sort((a, b) => a - b) };
  });
}

export function validateDraft(
  items: DraftItem[],
  numAgents: number,
  taskNames: string[]
): DraftProblem[] {
  const problems: DraftProblem[] = [];
  const seen = new Set<string>();
  items.forEach((item, index) => {
    if (seen.has(item.task)) {
      problems.push({ index, message: `task ${item.task} appears twice` });
    }
    seen.add(item.task);
    if (!taskNames.includes(item.task)) {
      problems.push({ index, message: `unknown task ${item.task}` });
    }
    if (item.coalition.length === 0) {
      problems.push({ index, message: `no agents assigned to ${item.task}` });
    }
    for (const id of item.coalition) {
      if (id < 1 || id > numAgents) {
        problems.push({ index, message: `agent r${id} out of range` });
      }
    }
  });
  return problems;
}

export function moveItem(
  items: DraftItem[],
  index: number,
  delta: -1 | 1
): DraftItem[] {
  const target = index + delta;
  if (target < 0 || target >= items.length) {
    return items;
  }
  const next = items.slice();
  [next[index], next[target]] = [next[target], next[index]];
  return next;
}

export function toggleAgent(item: DraftItem, agentId: number): DraftItem {
  const has = item.coalition.includes(agentId);
  const coalition = has
    ? item.coalition.filter((id) => id !== agentId)
    : [...item.coalition, agentId].sort((a, b) => a - b);
  return { ...item, coalition };
}
