// PROV-JSON parsing into the view model, plus graph statistics that must
// match the backend's `prov stats` output number-for-number.

import type { GraphStats, ViewEdge, ViewGraph, ViewNode } from "./types.js";

const RELATION_ROLE_KEYS: Record<string, [string, string]> = {
  used: ["prov:activity", "prov:entity"],
  wasGeneratedBy: ["prov:entity", "prov:activity"],
  wasAssociatedWith: ["prov:activity", "prov:agent"],
  wasInformedBy: ["prov:informed", "prov:informant"],
  wasDerivedFrom: ["prov:generatedEntity", "prov:usedEntity"],
};

export const RELATION_KINDS = Object.keys(RELATION_ROLE_KEYS);

type Record_ = Record<string, unknown>;

function asObject(value: unknown, what: string): Record_ {
  if (value === undefined) return {};
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new Error(`PROV-JSON ${what} section must be an object`);
  }
  return value as Record_;
}

export function parseProvDocument(text: string): ViewGraph {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new Error(`not valid JSON: ${(err as Error).message}`);
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new Error("PROV-JSON top level must be an object");
  }
  const doc = raw as Record_;
  if (!("activity" in doc) && !("entity" in doc) && !("agent" in doc)) {
    throw new Error("document has no activity/entity/agent sections");
  }

  const nodes: ViewNode[] = [];
  const seen = new Set<string>();
  const addNodes = (section: string, kind: ViewNode["kind"]) => {
    for (const [id, attrs] of Object.entries(asObject(doc[section], section))) {
      if (seen.has(id)) throw new Error(`duplicate node id ${id}`);
      seen.add(id);
      const attributes = asObject(attrs, `${section} record`);
      nodes.push({
        id,
        kind,
        label: String(attributes["prov:label"] ?? id),
        attributes,
      });
    }
  };
  addNodes("activity", "activity");
  addNodes("entity", "entity");
  addNodes("agent", "agent");

  const edges: ViewEdge[] = [];
  for (const [kind, [fromKey, toKey]] of Object.entries(RELATION_ROLE_KEYS)) {
    for (const [blankId, recordRaw] of Object.entries(asObject(doc[kind], kind))) {
      const record = asObject(recordRaw, `${kind} record ${blankId}`);
      const from = record[fromKey];
      const to = record[toKey];
      if (typeof from !== "string" || typeof to !== "string") {
        throw new Error(`${kind} record ${blankId} is missing ${fromKey}/${toKey}`);
      }
      if (!seen.has(from) || !seen.has(to)) {
        throw new Error(`${kind} record ${blankId} references unknown node`);
      }
      edges.push({ kind, from, to });
    }
  }
  return { nodes, edges };
}

export function computeStats(view: ViewGraph): GraphStats {
  const byKind: Record<string, number> = {};
  for (const kind of RELATION_KINDS) byKind[kind] = 0;
  for (const edge of view.edges) byKind[edge.kind] += 1;

  let total = 0;
  for (const node of view.nodes) {
    if (node.kind === "activity" && node.attributes["pc:role"] === "workflow") {
      total = Number(node.attributes["pc:duration_s"] ?? 0);
      break;
    }
  }

  return {
    activity_count: view.nodes.filter((n) => n.kind === "activity").length,
    entity_count: view.nodes.filter((n) => n.kind === "entity").length,
    agent_count: view.nodes.filter((n) => n.kind === "agent").length,
    relation_count_by_kind: byKind,
    total_duration_s: total,
    critical_path_len: criticalPathLen(view),
  };
}

// Longest wasInformedBy chain measured in activities; 0 when no such edges.
function criticalPathLen(view: ViewGraph): number {
  const outgoing = new Map<string, string[]>();
  const nodes = new Set<string>();
  for (const edge of view.edges) {
    if (edge.kind !== "wasInformedBy") continue;
    // informant -> informed
    const from = edge.to;
    const to = edge.from;
    if (!outgoing.has(from)) outgoing.set(from, []);
    outgoing.get(from)!.push(to);
    nodes.add(from);
    nodes.add(to);
  }
  if (nodes.size === 0) return 0;
  const memo = new Map<string, number>();
  const longestFrom = (node: string): number => {
    const cached = memo.get(node);
    if (cached !== undefined) return cached;
    let best = 1;
    for (const succ of outgoing.get(node) ?? []) {
      best = Math.max(best, 1 + longestFrom(succ));
    }
    memo.set(node, best);
    return best;
  };
  let best = 0;
  for (const node of nodes) best = Math.max(best, longestFrom(node));
  return best;
}

export function neighborsOf(view: ViewGraph, id: string): Set<string> {
  const out = new Set<string>();
  for (const edge of view.edges) {
    if (edge.from === id) out.add(edge.to);
    if (edge.to === id) out.add(edge.from);
  }
  return out;
}
