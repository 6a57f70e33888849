import { Window } from "happy-dom";
import { describe, expect, it } from "vitest";

import { highlightedLabels, renderGraph } from "../src/graphview.js";
import { laboratoryGraph, steedGraph, timberGraph } from "./fixtures.js";

function dom(): Document {
    return new Window().document as unknown as Document;
}

describe("renderGraph", () => {
    it("renders every payload node and edge without mutation", () => {
        const doc = dom();
        const before = JSON.stringify(laboratoryGraph);
        const svg = renderGraph(doc, laboratoryGraph, []);
        expect(JSON.stringify(laboratoryGraph)).toBe(before);
        expect(svg.querySelectorAll("g.node")).toHaveLength(5);
        expect(svg.querySelectorAll("line.edge")).toHaveLength(5);
        const labels = [...svg.querySelectorAll("g.node text")].map(
            (el) => el.textContent,
        );
        expect(labels).toContain("InstitutePlace|場所");
        expect(labels).toContain("~");
    });

    it("marks exactly the requested nodes", () => {
        const doc = dom();
        const svg = renderGraph(doc, timberGraph, [0]);
        expect(highlightedLabels(svg)).toEqual(["wood|木"]);
        const none = renderGraph(doc, steedGraph, []);
        expect(highlightedLabels(none)).toEqual([]);
    });

    it("is deterministic for identical payloads", () => {
        const doc = dom();
        const one = renderGraph(doc, laboratoryGraph, [2]).outerHTML;
        const two = renderGraph(doc, structuredClone(laboratoryGraph), [2]).outerHTML;
        expect(one).toBe(two);
    });

    it("tags node kinds for styling", () => {
        const doc = dom();
        const svg = renderGraph(doc, laboratoryGraph, []);
        expect(svg.querySelectorAll(".node-function")).toHaveLength(1);
        expect(svg.querySelectorAll(".node-self")).toHaveLength(1);
    });
});
