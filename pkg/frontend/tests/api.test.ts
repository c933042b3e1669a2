import { describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError, JobDoc } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("ApiClient", () => {
  it("creates sessions against the base URL", async () => {
    const calls: string[] = [];
    const client = new ApiClient("http://svc", async (url, init) => {
      calls.push(`${init?.method ?? "GET"} ${url}`);
      return jsonResponse({ id: "abc", domain: "graph", object_count: 46,
                            objects: [], concepts: [], theorems: [],
                            pending: [], resolved: [], subgoals: [], job: null });
    });
    const doc = await client.createSession("catalog");
    expect(doc.id).toBe("abc");
    expect(calls).toEqual(["POST http://svc/sessions"]);
  });

  it("raises typed errors with the service's code", async () => {
    const client = new ApiClient("http://svc", async () =>
      jsonResponse({ code: "bogus-counterexample",
                     message: "object does not violate the claim",
                     detail: { claim_value: true } }, 422));
    try {
      await client.submitVerdict("s", { subject: "c1", kind: "refuted" });
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
      expect((err as ApiError).status).toBe(422);
      expect((err as ApiError).body.code).toBe("bogus-counterexample");
      expect((err as ApiError).body.detail.claim_value).toBe(true);
    }
  });

  it("starts conjecture jobs without waiting and polls to completion", async () => {
    vi.useFakeTimers();
    let polls = 0;
    const running: JobDoc = { id: "j1", kind: "conjectures", status: "running",
                              result: null, error: null };
    const done: JobDoc = { ...running, status: "done",
                           result: { conjectures: [] } };
    const client = new ApiClient("http://svc", async (url, init) => {
      if (url.endsWith("/conjectures?wait=false")) {
        expect(init?.method).toBe("POST");
        return jsonResponse({ job: running }, 202);
      }
      polls += 1;
      return jsonResponse(polls < 3 ? running : done);
    });
    const job = await client.startConjectures("s", {
      target: "is_hamiltonian", mode: "necessary",
    });
    expect(job.status).toBe("running");
    const promise = client.pollJob("s", job.id, 2000);
    await vi.advanceTimersByTimeAsync(10_000);
    const finished = await promise;
    expect(finished.status).toBe("done");
    expect(polls).toBe(3);
    vi.useRealTimers();
  });
});
