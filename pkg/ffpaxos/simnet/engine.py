"""
Discrete-event engine.

One heap of events ordered by (time, sequence). A run is a pure function of
(config, workload, horizon): all randomness comes from seeded streams.
"""

import heapq
import itertools
import logging
from typing import Dict, List, Optional, Tuple, Union

from ffpaxos import wire
from ffpaxos.core.messages import Message, payload
from ffpaxos.errors import InvalidSystemError
from ffpaxos.quorum import validate_fast_flexible
from ffpaxos.simnet import trace as tr
from ffpaxos.simnet.model import SimConfig
from ffpaxos.simnet.network import Draw, Outcome, Router, deliver_schedule
from ffpaxos.simnet.nodes import AcceptorNode, LearnerNode, ProposerNode
from ffpaxos.simnet.trace import Trace
from ffpaxos.workload import Request, WorkloadSpec

logger = logging.getLogger(__name__)

CLIENT, DELIVER, TIMER = 0, 1, 2

Node = Union[AcceptorNode, ProposerNode, LearnerNode]


def check_system(config: SimConfig) -> None:
    """Refuse invalid quorum systems unless the config opts in"""
    report = validate_fast_flexible(config.quorums)
    if not report.valid:
        if not config.allow_invalid:
            raise InvalidSystemError(report)
        logger.info("running invalid system %s (allow_invalid)", config.quorums.describe())


class Simulation:
    def __init__(self, config: SimConfig, workload: WorkloadSpec,
                 horizon: Optional[float] = None, requests: Optional[List[Request]] = None):
        check_system(config)
        self.config = config
        self.workload = workload
        self.horizon = workload.horizon_ms if horizon is None else float(horizon)
        self.requests = workload.requests(config.seed) if requests is None else list(requests)
        self.trace = Trace(config.seed, config.fingerprint(workload.to_dict()))
        self.now = 0.0
        self._queue: List[Tuple] = []
        self._seq = itertools.count()
        self.counters: Dict[str, int] = {
            "events": 0, "sent": 0, "delivered": 0, "dropped": 0,
            "duplicated": 0, "partitioned": 0, "bytes": 0,
        }

        rounds = config.rounds
        armed = 0 if config.prearm and rounds.is_fast(0) else None
        self.armed_round = armed
        self.router = Router(config.acceptor_addresses(), config.proposer_addresses(),
                             config.learner_addresses(), rounds)
        self.nodes: Dict[str, Node] = {}
        for i in range(config.n):
            node = AcceptorNode(i, rounds, armed)
            self.nodes[node.address] = node
        for i in range(config.proposers):
            node = ProposerNode(i, config.quorums, rounds, config.timeouts, config.seed, armed)
            self.nodes[node.address] = node
        for i in range(config.learners):
            node = LearnerNode(i, config.quorums, rounds)
            self.nodes[node.address] = node

    # ------------------------------------------------------------------------
    # Context for nodes
    # ------------------------------------------------------------------------

    def record(self, node: str, kind: str, data: dict) -> None:
        self.trace.add(self.now, node, kind, data)

    def send(self, src: str, msg: Message) -> None:
        for dst in self.router.targets(msg):
            if dst == src:
                continue
            self.counters["sent"] += 1
            ordinal = self.router.ordinal(src, dst, msg)
            if self.config.separated(src, dst, self.now):
                self.counters["partitioned"] += 1
                self.record(src, tr.DROP, {"to": dst, "reason": "partition", **payload(msg)})
                continue
            draw = Draw.for_send(self.config.seed, src, dst, msg, ordinal)
            schedule = deliver_schedule(self.config.link_for(src, dst), draw)
            if schedule.outcome is Outcome.DROP:
                self.counters["dropped"] += 1
                self.record(src, tr.DROP, {"to": dst, "reason": "loss", **payload(msg)})
                continue
            if schedule.outcome is Outcome.DUPLICATE:
                self.counters["duplicated"] += 1
            frame = wire.encode(src, dst, msg)
            for delay in schedule.delays:
                self.counters["bytes"] += len(frame)
                self._push(self.now + delay, DELIVER, (src, dst, frame))

    def set_timer(self, node: str, instance: int, generation: int, delay: float) -> None:
        self._push(self.now + delay, TIMER, (node, instance, generation))

    def _push(self, time: float, kind: int, data) -> None:
        heapq.heappush(self._queue, (time, next(self._seq), kind, data))

    # ------------------------------------------------------------------------
    # Loop
    # ------------------------------------------------------------------------

    def _boot(self) -> None:
        for address, node in self.nodes.items():
            self.record(address, tr.BOOT, {"role": node.role, "armed": self.armed_round})
        for req in self.requests:
            self._push(req.time, CLIENT, req)

    def _dispatch(self, kind: int, data) -> None:
        if kind == CLIENT:
            req: Request = data
            address = f"p{req.client % self.config.proposers}"
            self.record(address, tr.CLIENT, {"instance": req.instance, "value": req.value,
                                             "client": req.client, "racing": req.racing})
            self.nodes[address].on_client(req.instance, req.value, self)
        elif kind == DELIVER:
            src, dst, frame = data
            _, _, msg = wire.decode(frame)
            if self.config.separated(src, dst, self.now):
                self.counters["partitioned"] += 1
                self.record(dst, tr.DROP, {"from": src, "reason": "partition", **payload(msg)})
                return
            self.counters["delivered"] += 1
            self.record(dst, tr.DELIVER, {"from": src, **payload(msg)})
            self.nodes[dst].handle(msg, self)
        else:
            node, instance, generation = data
            self.nodes[node].on_timer(instance, generation, self)

    def run(self) -> Trace:
        self._boot()
        budget = self.config.max_events
        while self._queue:
            time, _, kind, data = self._queue[0]
            if time > self.horizon:
                break
            if self.counters["events"] >= budget:
                self.record("sim", tr.FAULT, {"fault": "event-budget", "instance": -1,
                                              "round": -1, "detail": f"{budget} events"})
                logger.warning("seed %d: event budget %d exhausted at t=%.3f ms",
                               self.config.seed, budget, self.now)
                break
            heapq.heappop(self._queue)
            self.now = time
            self.counters["events"] += 1
            self._dispatch(kind, data)
        self.record("sim", tr.STATS, dict(self.counters, pending=len(self._queue)))
        return self.trace


def run(config: SimConfig, workload: WorkloadSpec, horizon: Optional[float] = None) -> Trace:
    return Simulation(config, workload, horizon).run()
