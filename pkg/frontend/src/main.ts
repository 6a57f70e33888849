// Browser bootstrap: annotator identity, keyboard wiring, app start.

import { ApiClient } from "./api.js";
import { App, validateTask } from "./app.js";

function annotatorName(): string {
    let name = window.localStorage.getItem("annotator");
    while (!name) {
        name = window.prompt("annotator id:")?.trim() ?? null;
    }
    window.localStorage.setItem("annotator", name);
    return name;
}

function boot(): void {
    const root = document.getElementById("app");
    if (!root) {
        throw new Error("#app element missing");
    }
    const api = new ApiClient("");
    const app = new App(document, api, annotatorName(), root);
    const who = document.getElementById("annotator-name");
    if (who) {
        who.textContent = app.annotator;
    }
    document.addEventListener("keydown", (event) => {
        if ((event.target as HTMLElement | null)?.tagName === "INPUT") {
            return;
        }
        app.handleKey(event.key);
    });
    app.start().catch((error) => {
        app.showError(`cannot reach the annotation server: ${error}`);
    });
}

// validateTask guards payloads when tasks arrive through other entry points.
export { validateTask };

boot();
