"""
Run traces and their text format.

    #ffpaxos-trace<TAB>v1<TAB>seed=<seed><TAB>config=<sha256>
    <time ms %.6f><TAB><node><TAB><kind><TAB><canonical JSON payload>

The text form is canonical: dumps(loads(text)) == text.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Union

MAGIC = "#ffpaxos-trace"
VERSION = "v1"

# record kinds
BOOT = "boot"
CLIENT = "client"
DELIVER = "deliver"
DROP = "drop"
STATE = "state"
PICK = "pick"
DECIDE = "decide"
RECOVER = "recover"
TIMER = "timer"
FAULT = "fault"
STATS = "stats"
STEP = "step"

KINDS = (BOOT, CLIENT, DELIVER, DROP, STATE, PICK, DECIDE, RECOVER, TIMER, FAULT, STATS, STEP)


def canonical(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass(frozen=True)
class Record:
    time: float
    node: str
    kind: str
    payload: Dict[str, Any]

    def line(self) -> str:
        return f"{self.time:.6f}\t{self.node}\t{self.kind}\t{canonical(self.payload)}"

    def __getitem__(self, key):
        return self.payload[key]

    def get(self, key, default=None):
        return self.payload.get(key, default)


class Trace:
    def __init__(self, seed: int = 0, config_hash: str = "", records: Optional[List[Record]] = None):
        self.seed = seed
        self.config_hash = config_hash
        self.records: List[Record] = list(records or [])

    def add(self, time: float, node: str, kind: str, payload: Dict[str, Any]) -> Record:
        record = Record(float(time), node, kind, payload)
        self.records.append(record)
        return record

    def __len__(self):
        return len(self.records)

    def __iter__(self) -> Iterator[Record]:
        return iter(self.records)

    def of_kind(self, *kinds: str) -> List[Record]:
        return [r for r in self.records if r.kind in kinds]

    def decisions(self) -> List[Record]:
        return self.of_kind(DECIDE)

    def faults(self) -> List[Record]:
        return self.of_kind(FAULT)

    def stats(self) -> Dict[str, Any]:
        found = self.of_kind(STATS)
        return dict(found[-1].payload) if found else {}

    def slice(self, keep: Callable[[Record], bool]) -> "Trace":
        return Trace(self.seed, self.config_hash, [r for r in self.records if keep(r)])

    def for_instance(self, instance: int) -> "Trace":
        return self.slice(lambda r: r.payload.get("instance") == instance)

    # ------------------------------------------------------------------------
    # Text form
    # ------------------------------------------------------------------------

    def header(self) -> str:
        return f"{MAGIC}\t{VERSION}\tseed={self.seed}\tconfig={self.config_hash}"

    def lines(self) -> Iterable[str]:
        yield self.header()
        for record in self.records:
            yield record.line()

    def dumps(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def dump(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def loads(cls, text: str) -> "Trace":
        lines = text.splitlines()
        if not lines:
            raise ValueError("empty trace")
        head = lines[0].split("\t")
        if len(head) != 4 or head[0] != MAGIC or head[1] != VERSION:
            raise ValueError(f"not an ffpaxos trace: {lines[0][:60]!r}")
        if not head[2].startswith("seed=") or not head[3].startswith("config="):
            raise ValueError(f"malformed trace header {lines[0]!r}")
        trace = cls(int(head[2][5:]), head[3][7:])
        for number, line in enumerate(lines[1:], start=2):
            parts = line.split("\t", 3)
            if len(parts) != 4:
                raise ValueError(f"line {number}: expected 4 tab-separated fields")
            time, node, kind, payload = parts
            trace.add(float(time), node, kind, json.loads(payload))
        return trace

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Trace":
        return cls.loads(Path(path).read_text(encoding="utf-8"))
