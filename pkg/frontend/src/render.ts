// SVG rendering with the provenance visual grammar: activities are blue
// rectangles, entities yellow ovals, agents orange houses. A toggle adds
// compact white info boxes (timing/status or type/dimensions) next to each
// node, mirroring the DOT output.

import type { Point, ViewGraph, ViewNode } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export const FILL: Record<ViewNode["kind"], string> = {
  activity: "#9FB1FC",
  entity: "#FFFC87",
  agent: "#FED37F",
};

const NODE_W = 108;
const NODE_H = 36;

export interface RenderCallbacks {
  onNodeClick?: (id: string) => void;
}

export function renderGraph(
  svg: SVGSVGElement,
  view: ViewGraph,
  positions: Map<string, Point>,
  callbacks: RenderCallbacks = {},
  showInfoBoxes = false,
): void {
  svg.textContent = "";

  const edgeLayer = document.createElementNS(SVG_NS, "g");
  edgeLayer.setAttribute("class", "edges");
  svg.appendChild(edgeLayer);
  for (const edge of view.edges) {
    const from = positions.get(edge.from);
    const to = positions.get(edge.to);
    if (!from || !to) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("class", `edge edge-${edge.kind}`);
    line.setAttribute("data-kind", edge.kind);
    line.setAttribute("data-from", edge.from);
    line.setAttribute("data-to", edge.to);
    line.setAttribute("x1", String(from.x));
    line.setAttribute("y1", String(from.y));
    line.setAttribute("x2", String(to.x));
    line.setAttribute("y2", String(to.y));
    line.setAttribute("stroke", "#777");
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${edge.kind}: ${edge.from} -> ${edge.to}`;
    line.appendChild(title);
    edgeLayer.appendChild(line);
  }

  const nodeLayer = document.createElementNS(SVG_NS, "g");
  nodeLayer.setAttribute("class", "nodes");
  svg.appendChild(nodeLayer);
  for (const node of view.nodes) {
    const pos = positions.get(node.id);
    if (!pos) continue;
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("class", `node node-${node.kind}`);
    group.setAttribute("data-id", node.id);
    group.setAttribute("data-kind", node.kind);
    group.appendChild(shapeFor(node, pos));

    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(pos.x));
    text.setAttribute("y", String(pos.y + 4));
    text.setAttribute("text-anchor", "middle");
    text.setAttribute("font-size", "11");
    text.textContent = truncate(node.label, 16);
    group.appendChild(text);

    if (showInfoBoxes && node.kind !== "agent") {
      group.appendChild(infoBox(node, pos));
    }

    group.addEventListener("click", () => callbacks.onNodeClick?.(node.id));
    nodeLayer.appendChild(group);
  }
}

function shapeFor(node: ViewNode, pos: Point): SVGElement {
  if (node.kind === "activity") {
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("x", String(pos.x - NODE_W / 2));
    rect.setAttribute("y", String(pos.y - NODE_H / 2));
    rect.setAttribute("width", String(NODE_W));
    rect.setAttribute("height", String(NODE_H));
    rect.setAttribute("rx", "4");
    styleShape(rect, node);
    return rect;
  }
  if (node.kind === "entity") {
    const ellipse = document.createElementNS(SVG_NS, "ellipse");
    ellipse.setAttribute("cx", String(pos.x));
    ellipse.setAttribute("cy", String(pos.y));
    ellipse.setAttribute("rx", String(NODE_W / 2));
    ellipse.setAttribute("ry", String(NODE_H / 2 + 2));
    styleShape(ellipse, node);
    return ellipse;
  }
  // agent: a house
  const half = NODE_W / 2;
  const points = [
    [pos.x - half, pos.y + NODE_H / 2],
    [pos.x - half, pos.y - NODE_H / 4],
    [pos.x, pos.y - NODE_H],
    [pos.x + half, pos.y - NODE_H / 4],
    [pos.x + half, pos.y + NODE_H / 2],
  ]
    .map((p) => p.join(","))
    .join(" ");
  const polygon = document.createElementNS(SVG_NS, "polygon");
  polygon.setAttribute("points", points);
  styleShape(polygon, node);
  return polygon;
}

function styleShape(shape: SVGElement, node: ViewNode): void {
  shape.setAttribute("class", `shape shape-${node.kind}`);
  shape.setAttribute("fill", FILL[node.kind]);
  shape.setAttribute("stroke", "#333");
}

function infoBox(node: ViewNode, pos: Point): SVGElement {
  const group = document.createElementNS(SVG_NS, "g");
  group.setAttribute("class", "info-box");
  const lines = summaryLines(node);
  const x = pos.x + NODE_W / 2 + 6;
  const y = pos.y - NODE_H / 2;
  const rect = document.createElementNS(SVG_NS, "rect");
  rect.setAttribute("x", String(x));
  rect.setAttribute("y", String(y));
  rect.setAttribute("width", "120");
  rect.setAttribute("height", String(12 * lines.length + 8));
  rect.setAttribute("fill", "#FFFFFF");
  rect.setAttribute("stroke", "#999");
  group.appendChild(rect);
  lines.forEach((line, i) => {
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(x + 4));
    text.setAttribute("y", String(y + 12 * (i + 1)));
    text.setAttribute("font-size", "9");
    text.textContent = line;
    group.appendChild(text);
  });
  return group;
}

export function summaryLines(node: ViewNode): string[] {
  const attrs = node.attributes;
  if (node.kind === "activity") {
    return [
      `duration: ${attrs["pc:duration_s"] ?? "?"}s`,
      `status: ${attrs["pc:status"] ?? "?"}`,
    ];
  }
  if (node.kind === "entity") {
    const dims = attrs["pc:dimensions"];
    const dimText = Array.isArray(dims) && dims.length ? dims.join(", ") : "scalar";
    return [`type: ${attrs["pc:type"] ?? "?"}`, `dims: ${dimText}`];
  }
  return [String(node.label)];
}

export function detailRows(node: ViewNode): Array<[string, string]> {
  const attrs = node.attributes;
  if (node.kind === "activity") {
    return [
      ["kind", "activity"],
      ["label", node.label],
      ["start", String(attrs["prov:startTime"] ?? "")],
      ["end", String(attrs["prov:endTime"] ?? "")],
      ["duration (s)", String(attrs["pc:duration_s"] ?? "")],
      ["status", String(attrs["pc:status"] ?? "")],
      ["node", String(attrs["pc:node_id"] ?? "")],
    ];
  }
  if (node.kind === "entity") {
    const dims = attrs["pc:dimensions"];
    return [
      ["kind", "entity"],
      ["label", node.label],
      ["type", String(attrs["pc:type"] ?? "")],
      ["dimensions", Array.isArray(dims) ? dims.join(", ") : ""],
      ["role", String(attrs["pc:role"] ?? "")],
    ];
  }
  return [
    ["kind", "agent"],
    ["name", node.label],
    ["type", String(attrs["prov:type"] ?? "")],
  ];
}

export function applySelection(
  svg: SVGSVGElement,
  selected: string | null,
  neighbors: Set<string>,
): void {
  for (const group of Array.from(svg.querySelectorAll<SVGGElement>("g.node"))) {
    const id = group.getAttribute("data-id");
    group.classList.toggle("selected", id === selected);
    group.classList.toggle("neighbor", id !== selected && !!id && neighbors.has(id));
    const shape = group.querySelector(".shape");
    if (shape) {
      shape.setAttribute("stroke-width", id === selected ? "3" : "1");
      shape.setAttribute(
        "stroke",
        id === selected ? "#d6336c" : neighbors.has(id ?? "") ? "#1971c2" : "#333",
      );
    }
  }
}

function truncate(text: string, max: number): string {
  return text.length > max ? text.slice(0, max - 1) + "…" : text;
}
