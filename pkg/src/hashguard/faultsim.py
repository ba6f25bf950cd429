"""Stuck-at fault injection over the guarded ECHO/Fugue pipelines.

Faults are injected at transformation boundaries (the values the guards
observe), not at gates. A campaign draws every fault from a 32-bit LFSR
stream and runs the faulted computations in vectorized batches; each
trial's outcome depends only on its own draw, so reports do not depend on
batching or on the number of worker processes.

Outcome definitions used in reports:

* activated: the stuck value differed from the intended value at least once
* effective: activated and the final digest differs from the fault-free one
* detected: at least one check raised a flag
* missed: effective and not detected
* false alarm: detected although the digest is correct

By default a campaign draws from the boundaries the signature schemes
protect: S-box outputs and Fugue's final rounds are left out and comparator
flags are fault-free. Each can be brought back through CampaignConfig.
"""

import json
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from .echo_guard import GuardConfig, guarded_echo_hash
from .fugue256 import pad as fugue_pad
from .fugue_guard import guarded_fugue_hash
from .lfsr import Lfsr, trial_seed
from .signature import Boundary

SCHEMA_VERSION = "1.0"
ALGORITHMS = ("echo256", "fugue256")
MODELS = ("single", "multiple")
PERSISTENCE = ("transient", "permanent")

# S-box outputs carry no predicted signature of their own
UNCHECKED_STAGES = {"echo256": frozenset({"sub_bytes"}), "fugue256": frozenset({"sbox"})}
_FUGUE_SMIX_STAGES = frozenset({"sbox", "supermix"})
DEFAULT_MESSAGE_BYTES = {"echo256": 255, "fugue256": 64}


class InjectionPoint(NamedTuple):
    algorithm: str
    boundary: Boundary
    word: int
    width: int

    @property
    def ident(self) -> str:
        b = self.boundary
        return f"{self.algorithm}/{b.stage}/b{b.block}/r{b.round}/s{b.sub}/w{self.word}"

    @property
    def location(self) -> tuple:
        """Physical signal hit by a permanent fault: the same stage, sub-step and word
        in every round and block."""
        return (self.boundary.stage, self.boundary.sub, self.word)

    @property
    def is_flag(self) -> bool:
        return self.boundary.stage.endswith(".flag")

    @property
    def checked(self) -> bool:
        return not self.is_flag and self.boundary.stage not in UNCHECKED_STAGES[self.algorithm]


@dataclass(frozen=True)
class FaultSpec:
    target: InjectionPoint
    bits: tuple
    stuck: tuple
    persistence: str = "transient"

    def __post_init__(self):
        if not self.bits:
            raise ValueError("a fault needs at least one bit")
        if len(set(self.bits)) != len(self.bits):
            raise ValueError("fault bits must be distinct")
        if len(self.stuck) != len(self.bits) or any(v not in (0, 1) for v in self.stuck):
            raise ValueError("one stuck value (0 or 1) per bit")
        if any(not 0 <= b < self.target.width for b in self.bits):
            raise ValueError(f"bit index outside the {self.target.width}-bit target")
        if self.persistence not in PERSISTENCE:
            raise ValueError(f"persistence must be one of {PERSISTENCE}")

    @property
    def multiplicity(self) -> int:
        return len(self.bits)

    def masks(self):
        """(mask, value) as Python ints over the target width."""
        mask = value = 0
        for b, v in zip(self.bits, self.stuck):
            mask |= 1 << b
            value |= v << b
        return mask, value


def _check_algorithm(algorithm: str) -> None:
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def run_guarded(algorithm: str, message: bytes, hook=None, batch_shape: tuple = (),
                salt: bytes = bytes(16), guard: GuardConfig | None = None):
    _check_algorithm(algorithm)
    if algorithm == "echo256":
        return guarded_echo_hash(message, salt=salt, config=guard, hook=hook,
                                 batch_shape=batch_shape)
    return guarded_fugue_hash(message, hook=hook, batch_shape=batch_shape)


class _Recorder:
    """Hook that only records which boundaries a run visits (and their values)."""

    def __init__(self):
        self.seen = []

    def __call__(self, boundary, value):
        self.seen.append((boundary, np.array(value, copy=True)))
        return value


def _points_at(algorithm: str, boundary: Boundary, value: np.ndarray) -> list[InjectionPoint]:
    if boundary.stage.endswith(".flag"):
        return [InjectionPoint(algorithm, boundary, i, 1) for i in range(value.shape[-1])]
    if algorithm == "echo256":
        return [InjectionPoint(algorithm, boundary, w, 128) for w in range(value.shape[-2])]
    words = 4 if boundary.stage in _FUGUE_SMIX_STAGES else value.shape[-1]
    return [InjectionPoint(algorithm, boundary, w, 32) for w in range(words)]


def finalization_block(algorithm: str, message: bytes) -> int | None:
    """Block index used for Fugue's final rounds (ECHO has none)."""
    if algorithm == "fugue256":
        return len(fugue_pad(message, None))
    return None


def enumerate_targets(algorithm: str, message: bytes = b"", *, include_unchecked: bool = True,
                      include_flags: bool = False, include_finalization: bool = True,
                      salt: bytes = bytes(16)) -> list[InjectionPoint]:
    """Every injectable boundary word of one guarded run over ``message``.

    The list follows execution order and is stable across calls.
    """
    rec = _Recorder()
    run_guarded(algorithm, message, hook=rec, salt=salt)
    final = finalization_block(algorithm, message)
    points = []
    for boundary, value in rec.seen:
        if not include_finalization and boundary.block == final:
            continue
        for p in _points_at(algorithm, boundary, value):
            if p.is_flag and not include_flags:
                continue
            if not p.is_flag and not include_unchecked and not p.checked:
                continue
            points.append(p)
    return points


def golden_values(algorithm: str, message: bytes, salt: bytes = bytes(16)) -> dict:
    """Fault-free value of every boundary, keyed by Boundary."""
    rec = _Recorder()
    run_guarded(algorithm, message, hook=rec, salt=salt)
    return dict(rec.seen)


def _word_of(algorithm: str, value: np.ndarray, word: int) -> int:
    if algorithm == "echo256":
        return int.from_bytes(bytes(value[word]), "little")
    return int(value[word])


class FaultInjector:
    """Hook applying one stuck-at fault per batch row.

    ``faults[i]`` is applied to row i. Transient faults fire at their own
    boundary only; permanent ones at every boundary sharing their location.
    """

    def __init__(self, algorithm: str, faults: list[FaultSpec], batch_shape: tuple = None):
        self.algorithm = algorithm
        self.batch_shape = (len(faults),) if batch_shape is None else tuple(batch_shape)
        self.activated = np.zeros(len(faults), dtype=bool)
        self.hits = np.zeros(len(faults), dtype=np.int64)
        self.activations = np.zeros(len(faults), dtype=np.int64)
        self._transient = defaultdict(list)
        self._permanent = defaultdict(list)
        for row, f in enumerate(faults):
            mask, value = f.masks()
            entry = (row, f.target.word, mask, value)
            if f.persistence == "permanent":
                stage, sub, _ = f.target.location
                self._permanent[(stage, sub)].append(entry)
            else:
                self._transient[f.target.boundary].append(entry)

    def __call__(self, boundary: Boundary, value: np.ndarray) -> np.ndarray:
        entries = self._transient.get(boundary, []) + \
            self._permanent.get((boundary.stage, boundary.sub), [])
        if not entries:
            return value
        value = np.array(value, copy=True)
        tail = value.shape[len(self.batch_shape):]
        flat = value.reshape((-1,) + tail)
        rows = np.array([e[0] for e in entries], dtype=np.intp)
        words = np.array([e[1] for e in entries], dtype=np.intp)
        if boundary.stage.endswith(".flag"):
            mask = np.array([bool(e[2]) for e in entries])
            val = np.array([bool(e[3]) for e in entries])
            cur = flat[rows, words]
            new = np.where(mask, val, cur)
            changed = new != cur
        elif self.algorithm == "echo256":
            mask = np.array([list(e[2].to_bytes(16, "little")) for e in entries], dtype=np.uint8)
            val = np.array([list(e[3].to_bytes(16, "little")) for e in entries], dtype=np.uint8)
            cur = flat[rows, words]
            new = (cur & ~mask) | (val & mask)
            changed = (new != cur).any(axis=-1)
        else:
            mask = np.array([e[2] for e in entries], dtype=np.uint32)
            val = np.array([e[3] for e in entries], dtype=np.uint32)
            cur = flat[rows, words]
            new = (cur & ~mask) | (val & mask)
            changed = new != cur
        flat[rows, words] = new
        self.hits[rows] += 1
        self.activations[rows[changed]] += 1
        self.activated[rows[changed]] = True
        return flat.reshape(value.shape)


class InjectionResult(NamedTuple):
    digest: bytes
    report: object
    activated: bool


def inject(algorithm: str, message: bytes, fault: FaultSpec, salt: bytes = bytes(16),
           guard: GuardConfig | None = None) -> InjectionResult:
    """Run one guarded hash with ``fault`` applied."""
    _check_algorithm(algorithm)
    if fault.target.algorithm != algorithm:
        raise ValueError("fault target belongs to a different algorithm")
    valid = {(p.boundary, p.word) for p in
             enumerate_targets(algorithm, message, include_flags=True, salt=salt)}
    if (fault.target.boundary, fault.target.word) not in valid:
        raise ValueError(f"no such injection point: {fault.target.ident}")
    injector = FaultInjector(algorithm, [fault], batch_shape=())
    digest, report = run_guarded(algorithm, message, hook=injector, salt=salt, guard=guard)
    return InjectionResult(digest, report, bool(injector.activated[0]))


@dataclass(frozen=True)
class CampaignConfig:
    algorithm: str
    model: str = "multiple"
    persistence: str = "transient"
    count: int = 1000
    seed: int = 1
    messages: int = 8
    max_message_bytes: int | None = None
    max_bits: int = 8
    include_unchecked: bool = False
    include_comparators: bool = False
    include_finalization: bool = False
    flag_width: int = 32
    parity: str = "word"
    batch_size: int = 1024
    jobs: int = 1
    corpus: tuple | None = None

    def __post_init__(self):
        _check_algorithm(self.algorithm)
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")
        if self.persistence not in PERSISTENCE:
            raise ValueError(f"persistence must be one of {PERSISTENCE}")
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if self.max_bits < 2:
            raise ValueError("max_bits must be at least 2")
        if self.corpus is None and self.messages < 1:
            raise ValueError("need at least one message")

    @property
    def guard(self) -> GuardConfig:
        return GuardConfig(flag_width=self.flag_width, parity=self.parity)

    def message_corpus(self) -> list[bytes]:
        if self.corpus is not None:
            return [bytes(m) for m in self.corpus]
        limit = self.max_message_bytes
        if limit is None:
            limit = DEFAULT_MESSAGE_BYTES[self.algorithm]
        rng = Lfsr(self.seed)
        return [rng.bytes(rng.below(limit + 1)) for _ in range(self.messages)]

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("jobs")
        d.pop("batch_size")
        if d["corpus"] is not None:
            d["corpus"] = [bytes(m).hex() for m in d["corpus"]]
        return d


def draw_fault(rng: Lfsr, targets: list[InjectionPoint], model: str, persistence: str,
               max_bits: int) -> FaultSpec:
    point = targets[rng.below(len(targets))]
    if model == "single" or point.width == 1:
        k = 1
    else:
        k = 2 + rng.below(min(max_bits, point.width) - 1)
    bits = []
    while len(bits) < k:
        b = rng.below(point.width)
        if b not in bits:
            bits.append(b)
    polarity = rng.word()
    stuck = tuple((polarity >> i) & 1 for i in range(k))
    return FaultSpec(point, tuple(bits), stuck, persistence)


@dataclass
class CampaignReport:
    config: dict
    injected: int = 0
    activated: int = 0
    effective: int = 0
    detected: int = 0
    detected_effective: int = 0
    missed: int = 0
    false_alarms: int = 0
    coverage: float | None = None
    false_alarm_ratio: float | None = None
    false_alarm_ratio_activated: float | None = None
    per_check: dict = field(default_factory=dict)
    per_stage: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _ratio(num: int, den: int) -> float | None:
    return num / den if den else None


def _run_chunk(algorithm: str, message: bytes, faults: list[FaultSpec], guard: GuardConfig):
    """Per-trial outcomes for one batch that shares a message."""
    golden, golden_report = run_guarded(algorithm, message, guard=guard)
    if golden_report.raised:
        raise RuntimeError("a check fired on the fault-free run")
    injector = FaultInjector(algorithm, faults)
    digests, report = run_guarded(algorithm, message, hook=injector,
                                  batch_shape=(len(faults),), guard=guard)
    wrong = np.any(digests != np.frombuffer(golden, dtype=np.uint8), axis=-1)
    per_check = {k: np.asarray(v, dtype=bool) for k, v in report.by_check.items()}
    detected = np.zeros(len(faults), dtype=bool)
    for v in per_check.values():
        detected |= v
    return injector.activated, wrong, detected, per_check


def _job(args):
    return _run_chunk(*args)


def run_campaign(config: CampaignConfig) -> CampaignReport:
    corpus = config.message_corpus()
    targets = [enumerate_targets(config.algorithm, m, include_unchecked=config.include_unchecked,
                                 include_flags=config.include_comparators,
                                 include_finalization=config.include_finalization)
               for m in corpus]

    faults = []
    msg_of = np.empty(config.count, dtype=np.intp)
    for i in range(config.count):
        rng = Lfsr(trial_seed(config.seed, i))
        msg_of[i] = rng.below(len(corpus))
        faults.append(draw_fault(rng, targets[msg_of[i]], config.model, config.persistence,
                                 config.max_bits))

    jobs, rows = [], []
    for mi, message in enumerate(corpus):
        idx = np.flatnonzero(msg_of == mi)
        for start in range(0, len(idx), config.batch_size):
            chunk = idx[start:start + config.batch_size]
            jobs.append((config.algorithm, message, [faults[i] for i in chunk], config.guard))
            rows.append(chunk)

    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_job, jobs))
    else:
        results = [_job(j) for j in jobs]

    n = config.count
    activated = np.zeros(n, dtype=bool)
    wrong = np.zeros(n, dtype=bool)
    detected = np.zeros(n, dtype=bool)
    per_check = defaultdict(lambda: np.zeros(n, dtype=bool))
    for chunk, (act, wr, det, checks) in zip(rows, results):
        activated[chunk] = act
        wrong[chunk] = wr
        detected[chunk] = det
        for k, v in checks.items():
            per_check[k][chunk] = v

    effective = activated & wrong
    report = CampaignReport(config=config.echo())
    _fill_counts(report, activated, effective, detected)
    report.per_check = {k: {"raised": int(v.sum()), "raised_on_effective": int((v & effective).sum())}
                        for k, v in sorted(per_check.items())}
    stages = np.array([f.target.boundary.stage for f in faults])
    for stage in sorted(set(stages.tolist())):
        sel = stages == stage
        sub = {}
        _fill_counts_dict(sub, activated[sel], effective[sel], detected[sel])
        report.per_stage[stage] = sub
    return report


def _counts(activated, effective, detected) -> dict:
    return {
        "injected": int(activated.size),
        "activated": int(activated.sum()),
        "effective": int(effective.sum()),
        "detected": int(detected.sum()),
        "detected_effective": int((detected & effective).sum()),
        "missed": int((effective & ~detected).sum()),
        "false_alarms": int((detected & ~effective).sum()),
    }


def _fill_counts_dict(d: dict, activated, effective, detected) -> None:
    c = _counts(activated, effective, detected)
    d.update(c)
    d["coverage"] = _ratio(c["detected_effective"], c["effective"])


def _fill_counts(report: CampaignReport, activated, effective, detected) -> None:
    c = _counts(activated, effective, detected)
    for k, v in c.items():
        setattr(report, k, v)
    report.coverage = _ratio(c["detected_effective"], c["effective"])
    report.false_alarm_ratio = _ratio(c["false_alarms"], c["injected"])
    report.false_alarm_ratio_activated = _ratio(c["false_alarms"], c["activated"])


def single_bit_sweep(algorithm: str, message: bytes = b"", block: int = 0, round_index: int = 0,
                     batch_size: int = 4096, guard: GuardConfig | None = None):
    """Every activated single-bit stuck-at on the checked boundaries of one round.

    For ECHO a "round" is one whole compression (``block``); for Fugue it is
    round R of message word ``block``. The stuck value is the complement of
    the fault-free bit, so every fault is activated. Returns per-fault
    (faults, effective, detected) arrays.
    """
    golden = golden_values(algorithm, message)
    faults = []
    for p in enumerate_targets(algorithm, message, include_unchecked=False):
        b = p.boundary
        if b.block != block or (algorithm == "fugue256" and b.round != round_index):
            continue
        word = _word_of(algorithm, golden[b], p.word)
        for bit in range(p.width):
            faults.append(FaultSpec(p, (bit,), (1 - ((word >> bit) & 1),)))
    effective = np.zeros(len(faults), dtype=bool)
    detected = np.zeros(len(faults), dtype=bool)
    for start in range(0, len(faults), batch_size):
        chunk = faults[start:start + batch_size]
        act, wrong, det, _ = _run_chunk(algorithm, message, chunk, guard)
        if not act.all():
            raise RuntimeError("sweep fault failed to activate")
        effective[start:start + len(chunk)] = wrong
        detected[start:start + len(chunk)] = det
    return faults, effective, detected
