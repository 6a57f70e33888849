// Ordered retry queue: at most one in-flight verdict, failures stay queued.

import type { VerdictPayload } from "./types.js";

export interface QueuedVerdict {
    taskId: string;
    payload: VerdictPayload;
}

export type Sender = (taskId: string, payload: VerdictPayload) => Promise<unknown>;

export interface FlushResult {
    delivered: boolean;
    /** Set when the server permanently rejected a verdict (dropped, not retried). */
    rejected?: Error;
}

/** Errors whose `permanent` flag is true drop the verdict instead of retrying. */
export function isPermanent(error: unknown): boolean {
    return Boolean((error as { permanent?: boolean } | null)?.permanent);
}

export class RetryQueue {
    private items: QueuedVerdict[] = [];
    private inflight = false;

    get length(): number {
        return this.items.length;
    }

    pending(): readonly QueuedVerdict[] {
        return this.items;
    }

    enqueue(taskId: string, payload: VerdictPayload): void {
        this.items.push({ taskId, payload });
    }

    /** Send queued verdicts in order; stop at the first transient failure. */
    async flush(send: Sender): Promise<FlushResult> {
        if (this.inflight) {
            return { delivered: false };
        }
        this.inflight = true;
        try {
            while (this.items.length > 0) {
                const head = this.items[0]!;
                try {
                    await send(head.taskId, head.payload);
                } catch (error) {
                    if (isPermanent(error)) {
                        this.items.shift();
                        return { delivered: false, rejected: error as Error };
                    }
                    return { delivered: false };
                }
                this.items.shift();
            }
            return { delivered: true };
        } finally {
            this.inflight = false;
        }
    }
}
