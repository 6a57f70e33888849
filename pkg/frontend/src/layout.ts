// Deterministic layered layout for definition graphs.
//
// The server sends plain node/edge lists; the layout is computed here so
// payloads stay small and the placement is testable.  Layers follow the
// longest path from the root (the graphs are rooted DAGs whose only shared
// node is the "~" self-reference leaf); within a layer, nodes keep the
// deterministic order in which their parents reference them.

import type { GraphPayload } from "./types.js";

export interface PlacedNode {
    id: number;
    x: number;
    y: number;
    layer: number;
}

export interface PlacedEdge {
    source: number;
    target: number;
    label: string;
}

export interface Layout {
    nodes: PlacedNode[];
    edges: PlacedEdge[];
    width: number;
    height: number;
}

export const X_STEP = 170;
export const Y_STEP = 70;
const MARGIN = 30;

function edgeLabel(edge: { kind: string; label?: string; index?: number }): string {
    return edge.kind === "attribute" ? edge.label ?? "" : `arg ${edge.index ?? 0}`;
}

function edgeSortKey(edge: { kind: string; label?: string; index?: number }): string {
    // Argument edges keep written order ahead of attribute labels.
    return edge.kind === "arg"
        ? `0:${String(edge.index ?? 0).padStart(4, "0")}`
        : `1:${edge.label ?? ""}`;
}

export function layoutGraph(graph: GraphPayload): Layout {
    const outgoing = new Map<number, { target: number; key: string; label: string }[]>();
    for (const node of graph.nodes) {
        outgoing.set(node.id, []);
    }
    for (const edge of graph.edges) {
        outgoing.get(edge.source)?.push({
            target: edge.target,
            key: edgeSortKey(edge),
            label: edgeLabel(edge),
        });
    }
    for (const children of outgoing.values()) {
        children.sort((a, b) => (a.key < b.key ? -1 : a.key > b.key ? 1 : 0));
    }

    // Longest-path layering from the root.
    const layer = new Map<number, number>();
    const assign = (id: number, depth: number) => {
        const known = layer.get(id);
        if (known !== undefined && known >= depth) {
            return;
        }
        layer.set(id, depth);
        for (const child of outgoing.get(id) ?? []) {
            assign(child.target, depth + 1);
        }
    };
    assign(graph.root, 0);

    // Slot order within a layer: depth-first visit order, which is itself
    // deterministic because children are sorted.
    const slotOrder: number[] = [];
    const seen = new Set<number>();
    const visit = (id: number) => {
        if (!seen.has(id)) {
            seen.add(id);
            slotOrder.push(id);
        }
        for (const child of outgoing.get(id) ?? []) {
            visit(child.target);
        }
    };
    visit(graph.root);

    const slots = new Map<number, number>();
    for (const id of slotOrder) {
        const l = layer.get(id) ?? 0;
        slots.set(id, [...slots.keys()].filter((n) => layer.get(n) === l).length);
    }

    const nodes: PlacedNode[] = graph.nodes.map((node) => {
        const l = layer.get(node.id) ?? 0;
        const s = slots.get(node.id) ?? 0;
        return {
            id: node.id,
            layer: l,
            x: MARGIN + l * X_STEP,
            y: MARGIN + s * Y_STEP,
        };
    });
    const edges: PlacedEdge[] = graph.edges.map((edge) => ({
        source: edge.source,
        target: edge.target,
        label: edgeLabel(edge),
    }));
    const width = Math.max(...nodes.map((n) => n.x)) + X_STEP;
    const height = Math.max(...nodes.map((n) => n.y)) + Y_STEP;
    return { nodes, edges, width, height };
}
