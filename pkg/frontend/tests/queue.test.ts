import { describe, expect, it } from "vitest";

import { ApiError } from "../src/api.js";
import { RetryQueue } from "../src/queue.js";

describe("RetryQueue", () => {
    it("delivers queued verdicts in order", async () => {
        const queue = new RetryQueue();
        const sent: string[] = [];
        queue.enqueue("t1", { annotator: "a", decision: "correct" });
        queue.enqueue("t2", { annotator: "a", decision: "incorrect" });
        const result = await queue.flush(async (id) => {
            sent.push(id);
        });
        expect(result.delivered).toBe(true);
        expect(sent).toEqual(["t1", "t2"]);
        expect(queue.length).toBe(0);
    });

    it("stops at the first transient failure and keeps the rest", async () => {
        const queue = new RetryQueue();
        queue.enqueue("t1", { annotator: "a", decision: "correct" });
        queue.enqueue("t2", { annotator: "a", decision: "correct" });
        let calls = 0;
        const result = await queue.flush(async () => {
            calls += 1;
            throw new Error("offline");
        });
        expect(result.delivered).toBe(false);
        expect(result.rejected).toBeUndefined();
        expect(calls).toBe(1);
        expect(queue.length).toBe(2);
        expect(queue.pending()[0]?.taskId).toBe("t1");
    });

    it("retries successfully after a transient failure", async () => {
        const queue = new RetryQueue();
        queue.enqueue("t1", { annotator: "a", decision: "correct" });
        await queue.flush(async () => {
            throw new Error("offline");
        });
        const sent: string[] = [];
        const result = await queue.flush(async (id) => {
            sent.push(id);
        });
        expect(result.delivered).toBe(true);
        expect(sent).toEqual(["t1"]);
    });

    it("drops permanently rejected verdicts instead of retrying them", async () => {
        const queue = new RetryQueue();
        queue.enqueue("t1", { annotator: "a", decision: "correct" });
        const result = await queue.flush(async () => {
            throw new ApiError("unknown annotator", 400);
        });
        expect(result.delivered).toBe(false);
        expect(result.rejected?.message).toBe("unknown annotator");
        expect(queue.length).toBe(0);
    });

    it("allows only one in-flight flush", async () => {
        const queue = new RetryQueue();
        queue.enqueue("t1", { annotator: "a", decision: "correct" });
        let release: () => void = () => {};
        const gate = new Promise<void>((resolve) => {
            release = resolve;
        });
        const first = queue.flush(async () => gate);
        const second = await queue.flush(async () => {});
        expect(second.delivered).toBe(false); // rejected while the first is in flight
        release();
        expect((await first).delivered).toBe(true);
    });
});
