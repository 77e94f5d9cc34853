// Layered DAG placement. A node's layer is its longest-path depth from
// the roots, so every edge points strictly downward; ties inside a layer
// keep declaration order. Coordinates are deterministic, which the
// component tests rely on.

import type { ParsedGraph } from "./dot";

export const NODE_W = 170;
export const NODE_H = 44;
export const H_GAP = 28;
export const V_GAP = 46;
export const PADDING = 16;

export interface Placed {
  id: string;
  label: string;
  layer: number;
  slot: number;
  x: number;
  y: number;
}

export interface Layout {
  nodes: Map<string, Placed>;
  width: number;
  height: number;
}

export function layoutGraph(graph: ParsedGraph): Layout {
  const order = new Map(graph.nodes.map((n, i) => [n.id, i]));
  const indegree = new Map(graph.nodes.map((n) => [n.id, 0]));
  const out = new Map<string, string[]>(graph.nodes.map((n) => [n.id, []]));
  for (const [a, b] of graph.edges) {
    out.get(a)?.push(b);
    indegree.set(b, (indegree.get(b) ?? 0) + 1);
  }

  const layer = new Map<string, number>();
  const queue = graph.nodes.filter((n) => indegree.get(n.id) === 0).map((n) => n.id);
  for (const id of queue) layer.set(id, 0);
  let head = 0;
  while (head < queue.length) {
    const id = queue[head++];
    for (const next of out.get(id) ?? []) {
      layer.set(next, Math.max(layer.get(next) ?? 0, (layer.get(id) ?? 0) + 1));
      const left = (indegree.get(next) ?? 0) - 1;
      indegree.set(next, left);
      if (left === 0) queue.push(next);
    }
  }
  // a cycle would leave nodes unvisited; pin them to layer 0 rather than drop them
  for (const n of graph.nodes) if (!layer.has(n.id)) layer.set(n.id, 0);

  const byLayer = new Map<number, string[]>();
  for (const n of graph.nodes) {
    const l = layer.get(n.id)!;
    if (!byLayer.has(l)) byLayer.set(l, []);
    byLayer.get(l)!.push(n.id);
  }
  for (const ids of byLayer.values()) {
    ids.sort((a, b) => order.get(a)! - order.get(b)!);
  }

  const nodes = new Map<string, Placed>();
  let maxSlot = 0;
  for (const [l, ids] of byLayer) {
    ids.forEach((id, slot) => {
      nodes.set(id, {
        id,
        label: graph.nodes[order.get(id)!].label,
        layer: l,
        slot,
        x: PADDING + slot * (NODE_W + H_GAP),
        y: PADDING + l * (NODE_H + V_GAP),
      });
      maxSlot = Math.max(maxSlot, slot);
    });
  }
  const layerCount = byLayer.size === 0 ? 0 : Math.max(...byLayer.keys()) + 1;
  return {
    nodes,
    width: 2 * PADDING + (maxSlot + 1) * NODE_W + maxSlot * H_GAP,
    height: 2 * PADDING + layerCount * NODE_H + Math.max(0, layerCount - 1) * V_GAP,
  };
}
