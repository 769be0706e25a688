"""HTTP service hosting live elicitation sessions.

Each session runs its learner on a worker thread; the learner's oracle
blocks on a queue until a human answer arrives over the API.  Answered
queries are persisted to disk as transcript JSON after every answer.
"""

from __future__ import annotations

import json
import math
import threading
import uuid
from pathlib import Path
from queue import Queue
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .core import (
    ClassSpec,
    Completeness,
    CpNet,
    SwapInstance,
    dependency_dot,
    max_edges,
    net_to_dict,
)
from .learners import (
    learn_kbounded_complete,
    learn_kbounded_incomplete,
    learn_tree_complete,
    learn_tree_incomplete,
)
from .oracles import (
    OracleAnswer,
    OracleKind,
    OracleSession,
    session_transcript,
    swap_to_dict,
)
from .universal import UniversalSet, construct_product

_ABORT = object()


class _Aborted(Exception):
    pass


class SessionRequest(BaseModel):
    n: int = Field(ge=1)
    m: int = Field(default=2, ge=2)
    k: int = Field(default=1, ge=0)
    learner: str = Field(default="tree", pattern="^(tree|kbounded)$")
    mode: str = Field(default="complete", pattern="^(complete|incomplete)$")
    universal: Optional[list[list[int]]] = None
    names: Optional[list[str]] = None
    value_names: Optional[list[list[str]]] = None


class AnswerRequest(BaseModel):
    answer: str = Field(pattern="^(first|second|unknown)$")


class ElicitationSession:
    def __init__(self, req: SessionRequest, data_dir: Path):
        self.id = uuid.uuid4().hex[:12]
        self.mode = req.mode
        completeness = (
            Completeness.COMPLETE_ONLY if req.mode == "complete" else Completeness.ALLOW_INCOMPLETE
        )
        self.spec = ClassSpec(req.n, req.m, req.k, completeness)
        self.learner_kind = req.learner
        self.names = req.names or [f"x{i}" for i in range(req.n)]
        if len(self.names) != req.n:
            raise ValueError("need one name per variable")
        self.value_names = req.value_names or [
            [str(w) for w in range(req.m)] for _ in range(req.n)
        ]
        self.universal: Optional[UniversalSet] = None
        if req.learner == "kbounded":
            if req.universal is not None:
                self.universal = UniversalSet.of(req.m, req.n - 1, req.k, req.universal)
            else:
                self.universal = construct_product(req.m, req.n - 1, req.k)
        self.data_dir = data_dir
        self.cond = threading.Condition()
        self.queue: Queue = Queue()
        self.status = "learning"
        self.pending: Optional[SwapInstance] = None
        self.result: Optional[CpNet] = None
        self.error: Optional[str] = None
        self.answered = 0
        self.oracle = OracleSession(
            OracleKind.HUMAN, self.spec, provider=self._provide
        )
        self.thread = threading.Thread(target=self._run, daemon=True)
        self.thread.start()

    # -- worker side --------------------------------------------------------

    def _provide(self, x: SwapInstance) -> OracleAnswer:
        with self.cond:
            self.pending = x
            self.status = "awaiting"
            self.cond.notify_all()
        ans = self.queue.get()
        if ans is _ABORT:
            raise _Aborted()
        with self.cond:
            self.pending = None
            self.status = "learning"
        return ans

    def _run(self) -> None:
        try:
            if self.learner_kind == "tree":
                fn = learn_tree_complete if self.mode == "complete" else learn_tree_incomplete
                result = fn(self.oracle, self.spec)
            else:
                fn = (
                    learn_kbounded_complete
                    if self.mode == "complete"
                    else learn_kbounded_incomplete
                )
                result = fn(self.oracle, self.spec, self.universal)
            with self.cond:
                self.result = result.net
                self.status = "done"
                self.cond.notify_all()
        except _Aborted:
            with self.cond:
                self.status = "aborted"
                self.cond.notify_all()
        except Exception as exc:  # surface learner failures to the client
            with self.cond:
                self.error = str(exc)
                self.status = "failed"
                self.cond.notify_all()
        self._persist()

    # -- API side ------------------------------------------------------------

    def wait_settled(self, timeout: float = 60.0) -> None:
        with self.cond:
            self.cond.wait_for(lambda: self.status != "learning", timeout=timeout)

    def query_bound(self) -> int:
        n, k = self.spec.n, self.spec.k
        log = max(1, math.ceil(math.log2(n))) if n > 1 else 1
        if self.learner_kind == "tree":
            bound = 2 * n + (n - 1) * log
        else:
            bound = n * len(self.universal) + max_edges(self.spec) * log
        return bound * (2 if self.mode == "incomplete" else 1)

    def view(self) -> dict:
        with self.cond:
            pending = None
            if self.pending is not None:
                pending = {
                    **swap_to_dict(self.pending),
                    "names": self.names,
                    "value_names": self.value_names,
                }
            return {
                "id": self.id,
                "status": self.status,
                "mode": self.mode,
                "answered": self.answered,
                "bound": self.query_bound(),
                "pending": pending,
                "error": self.error,
            }

    def _persist(self) -> None:
        payload = {
            "id": self.id,
            "spec": {"n": self.spec.n, "m": self.spec.m, "k": self.spec.k},
            "learner": self.learner_kind,
            "mode": self.mode,
            "status": self.status,
            "answered": self.answered,
            "transcript": session_transcript(self.oracle),
            "result": net_to_dict(self.result) if self.result is not None else None,
        }
        path = self.data_dir / f"{self.id}.json"
        path.write_text(json.dumps(payload, indent=2))

    def submit(self, answer: str) -> None:
        if answer == "unknown" and self.mode == "complete":
            raise HTTPException(422, "this session requires a definite preference")
        with self.cond:
            if self.status != "awaiting":
                raise HTTPException(409, f"session is {self.status}, not awaiting an answer")
            self.status = "learning"
            self.answered += 1
        mapped = {
            "first": OracleAnswer.YES,
            "second": OracleAnswer.NO,
            "unknown": OracleAnswer.UNKNOWN,
        }[answer]
        self.queue.put(mapped)
        self.wait_settled()
        self._persist()

    def abort(self) -> None:
        with self.cond:
            running = self.status in ("awaiting", "learning")
        if running:
            self.queue.put(_ABORT)
            with self.cond:
                self.cond.wait_for(
                    lambda: self.status not in ("awaiting", "learning"), timeout=10.0
                )


def create_app(data_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="preference elicitation sessions")
    root = Path(data_dir) if data_dir else Path("sessions")
    root.mkdir(parents=True, exist_ok=True)
    sessions: dict[str, ElicitationSession] = {}

    def get_session(session_id: str) -> ElicitationSession:
        if session_id not in sessions:
            raise HTTPException(404, "unknown session")
        return sessions[session_id]

    @app.post("/sessions", status_code=201)
    def create_session(req: SessionRequest) -> dict:
        try:
            session = ElicitationSession(req, root)
        except ValueError as exc:
            raise HTTPException(422, str(exc))
        sessions[session.id] = session
        session.wait_settled()
        return session.view()

    @app.get("/sessions/{session_id}")
    def get_status(session_id: str) -> dict:
        return get_session(session_id).view()

    @app.post("/sessions/{session_id}/answer")
    def post_answer(session_id: str, req: AnswerRequest) -> dict:
        session = get_session(session_id)
        session.submit(req.answer)
        view = session.view()
        if session.result is not None:
            view["model"] = net_to_dict(session.result)
        return view

    @app.get("/sessions/{session_id}/model")
    def get_model(session_id: str) -> dict:
        session = get_session(session_id)
        if session.result is None:
            raise HTTPException(409, f"session is {session.status}, no model yet")
        return {
            "model": net_to_dict(session.result),
            "dot": dependency_dot(session.result, session.names),
        }

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str) -> None:
        session = get_session(session_id)
        session.abort()
        del sessions[session_id]

    return app
