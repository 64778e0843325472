// Typed client for the query service HTTP API.

export interface AgentInfo {
  id: number;
  shortName: string;
  atom: string;
  display: string;
}

export interface TaskInfo {
  name: string;
  cell: [number, number];
  coalitionSize: number;
}

export interface EnvInfo {
  numAgents: number;
  agents: AgentInfo[];
  tasks: TaskInfo[];
  grid: { w: number; h: number };
}

export interface PlanEvent {
  task: string;
  coalition: number[];
}

export interface PlanInfo {
  agents: number[];
  columns: PlanEvent[][];
}

export interface MmdpSummary {
  numStates: number;
  numTransitions: number;
  numAgents: number;
  tasks: string[];
  initial: number;
  totalVisits: number;
}

export interface WitnessEdge {
  src: number;
  dst: number;
  action: string[];
  events: PlanEvent[];
}

export interface Clause {
  kind: "precedence" | "coalition" | "never_observed";
  payload: Record<string, unknown>;
  text: string;
}

export interface Failure {
  index: number;
  task: string;
  coalition: number[];
  query: string;
  clauses: Clause[];
  removed: boolean;
  flagged: boolean;
}

export interface Report {
  failures: Failure[];
  finalQuery: string;
  finalFeasible: boolean;
  flagged: boolean;
}

export interface QueryAnswer {
  verdict: "feasible" | "infeasible";
  timings: Record<string, number>;
  mmdpStats: { numStates: number; numTransitions: number };
  witness?: WitnessEdge[];
  report?: Report;
  query?: string;
}

export interface ApiError {
  error: string;
  detail: string;
}

export class ServiceError extends Error {
  constructor(public status: number, public body: ApiError) {
    super(`${body.error}: ${body.detail}`);
  }
}

async function getJson<T>(url: string): Promise<T> {
  const response = await fetch(url);
  if (!response.ok) {
    throw new ServiceError(response.status, await response.json());
  }
  return response.json();
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  getEnv(): Promise<EnvInfo> {
    return getJson(`${this.baseUrl}/api/env`);
  }

  getPlan(): Promise<PlanInfo> {
    return getJson(`${this.baseUrl}/api/plan`);
  }

  getSummary(): Promise<MmdpSummary> {
    return getJson(`${this.baseUrl}/api/mmdp/summary`);
  }

  async postQuery(query: string, seed?: number): Promise<QueryAnswer> {
    const response = await fetch(`${this.baseUrl}/api/query`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(seed === undefined ? { query } : { query, seed }),
    });
    if (!response.ok) {
      throw new ServiceError(response.status, await response.json());
    }
    return response.json();
  }
}
