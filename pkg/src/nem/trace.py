"""Run traces: the per-step record every solver emits.

Each record carries (step, t, radius_sq, u, aux) where t is the schedule
coordinate of the algorithm (k*delta for the walk, iteration index for the
others), radius_sq = |x|^2 and u = H(x)/n is the normalized energy.  The aux
dict holds algorithm-specific scalars.

Serialization: CSV with columns step,t,radius_sq,u,aux and JSON under the
schema tag "trace.v1".
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

TRACE_SCHEMA = "trace.v1"


@dataclass
class TraceRecord:
    step: int
    t: float
    radius_sq: float
    u: float
    aux: dict = field(default_factory=dict)


class RunTrace:
    def __init__(self, algorithm: str, meta: dict | None = None):
        self.algorithm = algorithm
        self.meta = dict(meta or {})
        self.records: list[TraceRecord] = []

    def append(self, step: int, t: float, radius_sq: float, u: float, **aux):
        step = int(step)
        if self.records and step <= self.records[-1].step:
            raise ValueError(f"step {step} does not advance past {self.records[-1].step}")
        self.records.append(TraceRecord(step, float(t), float(radius_sq),
                                        float(u), {k: float(v) for k, v in aux.items()}))

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def last(self) -> TraceRecord:
        return self.records[-1]

    def column(self, name: str):
        if name in ("step", "t", "radius_sq", "u"):
            return [getattr(r, name) for r in self.records]
        return [r.aux.get(name, float("nan")) for r in self.records]

    # -- serialization ----------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "t", "radius_sq", "u", "aux"])
        for r in self.records:
            aux = ";".join(f"{k}={repr(v)}" for k, v in sorted(r.aux.items()))
            w.writerow([r.step, repr(r.t), repr(r.radius_sq), repr(r.u), aux])
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "schema": TRACE_SCHEMA,
            "algorithm": self.algorithm,
            "meta": self.meta,
            "records": [
                {"step": r.step, "t": r.t, "radius_sq": r.radius_sq,
                 "u": r.u, "aux": r.aux}
                for r in self.records
            ],
        }
        return json.dumps(payload, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunTrace":
        payload = json.loads(text)
        if payload.get("schema") != TRACE_SCHEMA:
            raise ValueError(f"unknown trace schema {payload.get('schema')!r}")
        out = cls(payload["algorithm"], payload.get("meta"))
        for r in payload["records"]:
            out.append(r["step"], r["t"], r["radius_sq"], r["u"], **r["aux"])
        return out

    @classmethod
    def from_csv(cls, text: str, algorithm: str = "unknown",
                 meta: dict | None = None) -> "RunTrace":
        out = cls(algorithm, meta)
        rows = csv.reader(io.StringIO(text))
        header = next(rows)
        if header[:4] != ["step", "t", "radius_sq", "u"]:
            raise ValueError("not a trace CSV")
        for row in rows:
            aux = {}
            if len(row) > 4 and row[4]:
                for item in row[4].split(";"):
                    k, _, v = item.partition("=")
                    aux[k] = float(v)
            out.append(int(row[0]), float(row[1]), float(row[2]), float(row[3]), **aux)
        return out
