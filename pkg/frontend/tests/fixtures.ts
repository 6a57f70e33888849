// Shared payloads mirroring the server's wire format.

import type { ConceptAnalogyTask, GraphPayload, SynsetTask } from "../src/types.js";

export const timberGraph: GraphPayload = {
    root: 0,
    nodes: [
        { id: 0, kind: "concept", label: "wood|木" },
        { id: 1, kind: "concept", label: "HighQuality|優質" },
    ],
    edges: [{ source: 0, target: 1, kind: "attribute", label: "qualification" }],
};

export const steedGraph: GraphPayload = {
    root: 0,
    nodes: [
        { id: 0, kind: "concept", label: "馬|horse" },
        { id: 1, kind: "concept", label: "HighQuality|優質" },
    ],
    edges: [{ source: 0, target: 1, kind: "attribute", label: "qualification" }],
};

export const laboratoryGraph: GraphPayload = {
    root: 0,
    nodes: [
        { id: 0, kind: "concept", label: "InstitutePlace|場所" },
        { id: 1, kind: "function", label: "or" },
        { id: 2, kind: "concept", label: "experiment|實驗" },
        { id: 3, kind: "self", label: "~" },
        { id: 4, kind: "concept", label: "research|研究" },
    ],
    edges: [
        { source: 2, target: 3, kind: "attribute", label: "location" },
        { source: 1, target: 2, kind: "arg", index: 0 },
        { source: 4, target: 3, kind: "attribute", label: "location" },
        { source: 1, target: 4, kind: "arg", index: 1 },
        { source: 0, target: 1, kind: "attribute", label: "telic" },
    ],
};

export const conceptTask: ConceptAnalogyTask = {
    id: "5a0a4d3be73e3a2f",
    kind: "concept_analogy",
    left: {
        word: "良材",
        sense: 2,
        concept: "wood|木",
        graph: timberGraph,
        highlight: [0],
    },
    right: {
        word: "駿馬",
        sense: 1,
        concept: "horse|馬",
        graph: steedGraph,
        highlight: [0],
    },
    decisions: ["correct", "incorrect"],
};

export const synsetTask: SynsetTask = {
    id: "77aa88bb99cc00dd",
    kind: "synset",
    concept: "FlowerGrass|花草",
    words: ["花草", "山茶花", "薰衣草", "鳶尾花"],
    decisions: ["keep", "remove"],
};
