// Wire types for the annotation server's JSON API.

export interface GraphNode {
    id: number;
    kind: "concept" | "word" | "function" | "self";
    label: string;
}

export interface GraphEdge {
    source: number;
    target: number;
    kind: "attribute" | "arg";
    label?: string;
    index?: number;
}

export interface GraphPayload {
    root: number;
    nodes: GraphNode[];
    edges: GraphEdge[];
}

export interface AnalogySide {
    word: string;
    sense: number;
    concept: string;
    graph: GraphPayload;
    highlight: number[];
}

export interface ConceptAnalogyTask {
    id: string;
    kind: "concept_analogy";
    left: AnalogySide;
    right: AnalogySide;
    decisions: string[];
}

export interface SynsetTask {
    id: string;
    kind: "synset";
    concept: string;
    words: string[];
    decisions: string[];
}

export type Task = ConceptAnalogyTask | SynsetTask;

export interface QueueDone {
    done: true;
}

export interface SessionInfo {
    tasks: number;
    annotators: string[];
    seed: number;
    progress: Record<string, { done: number; total: number }>;
}

export interface AgreementFigures {
    kappa: number | null;
    pairwise_cohen: number | null;
    n_items: number;
    n_annotators: number;
}

export interface AgreementReport {
    concept_analogies: AgreementFigures;
    synsets: AgreementFigures;
}

export type Decision = string | Record<string, "keep" | "remove">;

export interface VerdictPayload {
    annotator: string;
    decision: Decision;
}

export function isDone(value: Task | QueueDone): value is QueueDone {
    return (value as QueueDone).done === true;
}
