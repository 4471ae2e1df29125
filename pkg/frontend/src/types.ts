export type NodeKind = "activity" | "entity" | "agent";

export interface ViewNode {
  id: string;
  kind: NodeKind;
  label: string;
  attributes: Record<string, unknown>;
}

export interface ViewEdge {
  kind: string;
  from: string;
  to: string;
}

export interface ViewGraph {
  nodes: ViewNode[];
  edges: ViewEdge[];
}

export interface GraphStats {
  activity_count: number;
  entity_count: number;
  agent_count: number;
  relation_count_by_kind: Record<string, number>;
  total_duration_s: number;
  critical_path_len: number;
}

export interface Point {
  x: number;
  y: number;
}
