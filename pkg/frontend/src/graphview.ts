// SVG rendering of a laid-out definition graph.

import { layoutGraph } from "./layout.js";
import type { GraphPayload } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const NODE_W = 140;
const NODE_H = 34;

export function renderGraph(
    doc: Document,
    graph: GraphPayload,
    highlight: number[],
): SVGSVGElement {
    const placed = layoutGraph(graph);
    const svg = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
    svg.setAttribute("viewBox", `0 0 ${placed.width} ${placed.height}`);
    svg.setAttribute("class", "defgraph");

    const position = new Map(placed.nodes.map((n) => [n.id, n]));
    for (const edge of placed.edges) {
        const from = position.get(edge.source);
        const to = position.get(edge.target);
        if (!from || !to) {
            continue;
        }
        const line = doc.createElementNS(SVG_NS, "line");
        line.setAttribute("x1", String(from.x + NODE_W / 2));
        line.setAttribute("y1", String(from.y + NODE_H / 2));
        line.setAttribute("x2", String(to.x + NODE_W / 2));
        line.setAttribute("y2", String(to.y + NODE_H / 2));
        line.setAttribute("class", "edge");
        svg.appendChild(line);
        const text = doc.createElementNS(SVG_NS, "text");
        text.setAttribute("x", String((from.x + to.x) / 2 + NODE_W / 2));
        text.setAttribute("y", String((from.y + to.y) / 2 + NODE_H / 2 - 4));
        text.setAttribute("class", "edge-label");
        text.textContent = edge.label;
        svg.appendChild(text);
    }

    const marked = new Set(highlight);
    for (const node of graph.nodes) {
        const at = position.get(node.id);
        if (!at) {
            continue;
        }
        const group = doc.createElementNS(SVG_NS, "g");
        const classes = ["node", `node-${node.kind}`];
        if (marked.has(node.id)) {
            classes.push("node-highlight");
        }
        group.setAttribute("class", classes.join(" "));
        group.setAttribute("data-node-id", String(node.id));
        const rect = doc.createElementNS(SVG_NS, "rect");
        rect.setAttribute("x", String(at.x));
        rect.setAttribute("y", String(at.y));
        rect.setAttribute("width", String(NODE_W));
        rect.setAttribute("height", String(NODE_H));
        rect.setAttribute("rx", "8");
        group.appendChild(rect);
        const text = doc.createElementNS(SVG_NS, "text");
        text.setAttribute("x", String(at.x + NODE_W / 2));
        text.setAttribute("y", String(at.y + NODE_H / 2 + 5));
        text.setAttribute("text-anchor", "middle");
        text.textContent = node.label;
        group.appendChild(text);
        svg.appendChild(group);
    }
    return svg;
}

export function highlightedLabels(svg: SVGSVGElement): string[] {
    const out: string[] = [];
    svg.querySelectorAll(".node-highlight text").forEach((el) => {
        out.push(el.textContent ?? "");
    });
    return out;
}
