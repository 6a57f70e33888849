// Annotation app: task views, submit-and-advance, dashboard.
//
// The DOM is plain elements under one root; no framework.  Task content is
// never mutated: the verdict echoes the task id exactly as served.

import { ApiClient } from "./api.js";
import { renderGraph } from "./graphview.js";
import { RetryQueue } from "./queue.js";
import {
    isDone,
    type ConceptAnalogyTask,
    type Decision,
    type SessionInfo,
    type SynsetTask,
    type Task,
} from "./types.js";

export function formatKappa(value: number | null): string {
    return value === null ? "n/a" : value.toFixed(4);
}

export class App {
    readonly queue = new RetryQueue();
    current: Task | null = null;
    done = false;
    private keep = new Map<string, boolean>();
    private focusIndex = 0;

    constructor(
        private readonly doc: Document,
        private readonly api: ApiClient,
        readonly annotator: string,
        private readonly root: HTMLElement,
    ) {}

    // -- task views ------------------------------------------------------------

    renderTask(task: Task): void {
        this.current = task;
        this.clear();
        if (task.kind === "concept_analogy") {
            this.renderConceptTask(task);
        } else {
            this.renderSynsetTask(task);
        }
    }

    private renderConceptTask(task: ConceptAnalogyTask): void {
        const view = this.section("task concept-task");
        const title = this.doc.createElement("h2");
        title.textContent =
            `${task.left.word}#${task.left.sense} : ${task.left.concept}` +
            `  =  ${task.right.word}#${task.right.sense} : ${task.right.concept}`;
        view.appendChild(title);
        const graphs = this.doc.createElement("div");
        graphs.className = "graph-pair";
        for (const side of [task.left, task.right]) {
            const panel = this.doc.createElement("figure");
            panel.className = "graph-panel";
            const caption = this.doc.createElement("figcaption");
            caption.textContent = `${side.word} (sense ${side.sense})`;
            panel.appendChild(caption);
            panel.appendChild(renderGraph(this.doc, side.graph, side.highlight));
            graphs.appendChild(panel);
        }
        view.appendChild(graphs);
        view.appendChild(
            this.hint("keys: a = accept  ·  x = reject"),
        );
        const buttons = this.doc.createElement("div");
        buttons.className = "actions";
        for (const [label, decision] of [
            ["accept", "correct"],
            ["reject", "incorrect"],
        ] as const) {
            const button = this.doc.createElement("button");
            button.textContent = label;
            button.dataset.decision = decision;
            button.addEventListener("click", () => {
                void this.submitAndAdvance(decision);
            });
            buttons.appendChild(button);
        }
        view.appendChild(buttons);
    }

    private renderSynsetTask(task: SynsetTask): void {
        this.keep = new Map(task.words.map((w) => [w, true]));
        this.focusIndex = 0;
        const view = this.section("task synset-task");
        const title = this.doc.createElement("h2");
        title.textContent = `synset of ${task.concept}`;
        view.appendChild(title);
        const list = this.doc.createElement("ul");
        list.className = "synset-list";
        task.words.forEach((word, i) => {
            const item = this.doc.createElement("li");
            const box = this.doc.createElement("input");
            box.type = "checkbox";
            box.checked = true;
            box.id = `word-${i}`;
            box.addEventListener("change", () => {
                this.keep.set(word, box.checked);
            });
            const label = this.doc.createElement("label");
            label.htmlFor = box.id;
            label.textContent = word;
            item.appendChild(box);
            item.appendChild(label);
            list.appendChild(item);
        });
        view.appendChild(list);
        view.appendChild(
            this.hint("keys: j/k = move  ·  space = keep/remove  ·  enter = submit"),
        );
        const submit = this.doc.createElement("button");
        submit.textContent = "submit";
        submit.addEventListener("click", () => {
            void this.submitAndAdvance(this.synsetDecision());
        });
        view.appendChild(submit);
    }

    private synsetDecision(): Decision {
        const decision: Record<string, "keep" | "remove"> = {};
        for (const [word, kept] of this.keep) {
            decision[word] = kept ? "keep" : "remove";
        }
        return decision;
    }

    // -- flow --------------------------------------------------------------------

    async start(): Promise<void> {
        await this.refreshDashboard();
        await this.advance();
    }

    async advance(): Promise<void> {
        const next = await this.api.nextTask(this.annotator);
        if (isDone(next)) {
            this.current = null;
            this.done = true;
            await this.renderCompletion();
            return;
        }
        let task: Task;
        try {
            task = validateTask(next);
        } catch (error) {
            // A malformed payload must not be submittable.
            this.current = null;
            this.clear();
            this.showError(`bad task payload from the server: ${error}`);
            return;
        }
        this.done = false;
        this.renderTask(task);
    }

    /** Submit the decision for the current task; advance only on success. */
    async submitAndAdvance(decision: Decision): Promise<void> {
        const task = this.current;
        if (!task) {
            return;
        }
        this.queue.enqueue(task.id, { annotator: this.annotator, decision });
        const result = await this.queue.flush((id, payload) =>
            this.api.submitVerdict(id, payload),
        );
        if (result.rejected) {
            // The form keeps its state; the verdict is not retried.
            this.showError(`server rejected the verdict: ${result.rejected.message}`);
            return;
        }
        if (!result.delivered) {
            this.showError(
                `submission failed; ${this.queue.length} verdict(s) queued for retry`,
            );
            return;
        }
        this.clearError();
        await this.refreshDashboard();
        await this.advance();
    }

    handleKey(key: string): void {
        const task = this.current;
        if (!task) {
            return;
        }
        if (task.kind === "concept_analogy") {
            if (key === "a") {
                void this.submitAndAdvance("correct");
            } else if (key === "x") {
                void this.submitAndAdvance("incorrect");
            }
            return;
        }
        const words = task.words;
        if (key === "j") {
            this.focusIndex = Math.min(this.focusIndex + 1, words.length - 1);
            this.markFocus();
        } else if (key === "k") {
            this.focusIndex = Math.max(this.focusIndex - 1, 0);
            this.markFocus();
        } else if (key === " ") {
            const word = words[this.focusIndex];
            if (word !== undefined) {
                this.keep.set(word, !(this.keep.get(word) ?? true));
                const box = this.doc.getElementById(
                    `word-${this.focusIndex}`,
                ) as HTMLInputElement | null;
                if (box) {
                    box.checked = this.keep.get(word) ?? true;
                }
            }
        } else if (key === "Enter") {
            void this.submitAndAdvance(this.synsetDecision());
        }
    }

    private markFocus(): void {
        this.root.querySelectorAll(".synset-list li").forEach((item, i) => {
            item.className = i === this.focusIndex ? "focused" : "";
        });
    }

    // -- dashboard ------------------------------------------------------------------

    async refreshDashboard(): Promise<void> {
        const [session, agreement] = await Promise.all([
            this.api.session(),
            this.api.agreement(),
        ]);
        let panel = this.root.querySelector(".dashboard");
        if (!panel) {
            panel = this.doc.createElement("aside");
            panel.className = "dashboard";
            this.root.appendChild(panel);
        }
        panel.innerHTML = "";
        const heading = this.doc.createElement("h3");
        heading.textContent = "session";
        panel.appendChild(heading);
        const progress = this.doc.createElement("ul");
        for (const annotator of session.annotators) {
            const stats = session.progress[annotator];
            const item = this.doc.createElement("li");
            item.textContent = `${annotator}: ${stats?.done ?? 0}/${stats?.total ?? 0}`;
            progress.appendChild(item);
        }
        panel.appendChild(progress);
        const kappa = this.doc.createElement("p");
        kappa.className = "kappa";
        kappa.textContent = `κ = ${formatKappa(agreement.concept_analogies.kappa)}`;
        panel.appendChild(kappa);
        const link = this.doc.createElement("a");
        link.href = "/api/export";
        link.textContent = "export verdicts";
        panel.appendChild(link);
    }

    private async renderCompletion(): Promise<void> {
        this.clear();
        const agreement = await this.api.agreement();
        const view = this.section("completion");
        const heading = this.doc.createElement("h2");
        heading.textContent = "all tasks annotated";
        view.appendChild(heading);
        const kappa = this.doc.createElement("p");
        kappa.className = "kappa";
        kappa.textContent = `κ = ${formatKappa(agreement.concept_analogies.kappa)}`;
        view.appendChild(kappa);
    }

    // -- DOM helpers --------------------------------------------------------------------

    private section(className: string): HTMLElement {
        const el = this.doc.createElement("section");
        el.className = className;
        this.root.appendChild(el);
        return el;
    }

    private hint(text: string): HTMLElement {
        const el = this.doc.createElement("p");
        el.className = "hint";
        el.textContent = text;
        return el;
    }

    private clear(): void {
        this.root.querySelectorAll("section").forEach((el) => el.remove());
    }

    showError(message: string): void {
        this.clearError();
        const banner = this.doc.createElement("div");
        banner.className = "error-banner";
        banner.textContent = message;
        this.root.prepend(banner);
    }

    clearError(): void {
        this.root.querySelector(".error-banner")?.remove();
    }
}

export function validateTask(value: unknown): Task {
    const task = value as Task;
    if (task.kind === "concept_analogy") {
        const sides = [task.left, task.right];
        if (sides.some((s) => !s || !s.graph || !Array.isArray(s.graph.nodes))) {
            throw new Error("malformed concept-analogy payload");
        }
        return task;
    }
    if (task.kind === "synset") {
        if (!Array.isArray(task.words) || task.words.length === 0) {
            throw new Error("malformed synset payload");
        }
        return task;
    }
    throw new Error("unknown task kind");
}
