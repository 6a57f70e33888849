// Thin client over the annotation server's JSON API.

import type {
    AgreementReport,
    QueueDone,
    SessionInfo,
    Task,
    VerdictPayload,
} from "./types.js";

export class ApiError extends Error {
    constructor(message: string, public readonly status: number) {
        super(message);
    }

    /** 4xx responses are rejections: retrying the same payload cannot help. */
    get permanent(): boolean {
        return this.status >= 400 && this.status < 500;
    }
}

async function asJson<T>(response: Response): Promise<T> {
    const body = await response.text();
    if (!response.ok) {
        let message = `HTTP ${response.status}`;
        try {
            const parsed = JSON.parse(body) as { error?: string };
            if (parsed.error) {
                message = parsed.error;
            }
        } catch {
            // keep the generic message
        }
        throw new ApiError(message, response.status);
    }
    return JSON.parse(body) as T;
}

export class ApiClient {
    constructor(private readonly base: string = "") {}

    session(): Promise<SessionInfo> {
        return fetch(`${this.base}/api/session`).then((r) => asJson<SessionInfo>(r));
    }

    nextTask(annotator: string): Promise<Task | QueueDone> {
        const query = encodeURIComponent(annotator);
        return fetch(`${this.base}/api/tasks/next?annotator=${query}`).then((r) =>
            asJson<Task | QueueDone>(r),
        );
    }

    // The task id is echoed into the URL byte-for-byte; the payload carries
    // only the annotator and the decision.
    submitVerdict(taskId: string, payload: VerdictPayload): Promise<{ ok: boolean }> {
        return fetch(`${this.base}/api/tasks/${taskId}/verdict`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(payload),
        }).then((r) => asJson<{ ok: boolean }>(r));
    }

    agreement(): Promise<AgreementReport> {
        return fetch(`${this.base}/api/agreement`).then((r) =>
            asJson<AgreementReport>(r),
        );
    }

    async exportTsv(): Promise<string> {
        const response = await fetch(`${this.base}/api/export`);
        if (!response.ok) {
            throw new ApiError(`HTTP ${response.status}`, response.status);
        }
        return response.text();
    }
}
