"""
Equivalence harness: runs encoders and squarers over a corpus with known ground
truth and checks every applicable oracle against it.
"""

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, product
from typing import Any, Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence

import numpy as np
from loguru import logger

from config import Config
from models import (
    BoolsysInstance, CnfFormula, Disjunction, Equation, IsTrue, Negation, PartitionInstance,
    SquaringPlan, Verdict, VerdictStatus,
)
from modules.reductions import (
    boolsys_brute_force, boolsys_to_system, partition_bounded_system, partition_feasible, partition_to_system,
)
from modules.resultants import macaulay_zero_test, sylvester_zero_test
from modules.squaring import ground_field_square, lambda_chain_square, lambda_plan_for, random_square_trials
from modules.verification import (
    CHAIN_SHAPES, PLAIN_SHAPES, BudgetExceededError, VerificationError, closure_satisfiable, structured_sign_oracle,
)
from utils.field import FieldCtx
from utils.poly import PolySystem

Oracle = Callable[[PolySystem], Verdict]

ORACLE_NAMES = ("auto", "structured", "enumerate", "sylvester", "macaulay")


# Oracle dispatch

def decide(sys: PolySystem, method: str = "auto", config: Optional[Config] = None) -> Verdict:
    """
    Run one oracle by name.

    auto picks structured when the provenance names a gadget shape, sylvester for
    two binary forms, closure search over prime fields and macaulay for other
    square systems.
    """
    config = config or Config()
    if method == "auto":
        shape = sys.metadata.get("method")
        if shape in PLAIN_SHAPES + CHAIN_SHAPES and "gadget_vars" in sys.metadata:
            method = "structured"
        elif sys.num_vars == 2 and sys.num_polys == 2:
            method = "sylvester"
        elif sys.ctx.is_prime_field:
            method = "enumerate"
        elif sys.is_square:
            method = "macaulay"
        else:
            raise VerificationError(f"no oracle decides a non-square, unstructured system over {sys.ctx}")
        logger.debug(f"Auto-selected the {method} oracle")

    if method == "structured":
        return structured_sign_oracle(sys)
    if method == "enumerate":
        return closure_satisfiable(sys, config)
    if method == "sylvester":
        return sylvester_zero_test(sys, config)
    if method == "macaulay":
        return macaulay_zero_test(sys, config)
    raise VerificationError(f"unknown oracle {method!r}")


# Corpora

def all_equations(num_vars: int) -> List[Equation]:
    """Every equation of the three forms over X_1..X_n."""
    indices = range(1, num_vars + 1)
    equations: List[Equation] = [IsTrue(i) for i in indices]
    equations += [Negation(i, j) for i, j in product(indices, repeat=2)]
    equations += [Disjunction(i, j, k) for i, j, k in product(indices, repeat=3)]
    return equations


def boolsys_corpus(max_vars: int, max_equations: int) -> Iterator[BoolsysInstance]:
    """All distinct equation sets with 1..max_equations equations over n <= max_vars variables."""
    for n in range(1, max_vars + 1):
        equations = all_equations(n)
        for size in range(1, max_equations + 1):
            for chosen in combinations(equations, size):
                yield BoolsysInstance(n, chosen)


def cnf_corpus(max_vars: int, max_clauses: int) -> Iterator[CnfFormula]:
    """Formulas whose clauses have one to three distinct variables, up to max_clauses clauses."""
    for n in range(1, max_vars + 1):
        clauses = []
        for width in range(1, 4):
            for variables in combinations(range(1, n + 1), width):
                for signs in product((1, -1), repeat=width):
                    clauses.append(tuple(s * v for s, v in zip(signs, variables)))
        for size in range(1, max_clauses + 1):
            for chosen in combinations(clauses, size):
                yield CnfFormula(n, chosen)


def partition_corpus(max_n: int, max_weight: int, samples: int = 0, sample_max_n: int = 10,
                     seed: int = 0) -> Iterator[PartitionInstance]:
    """Every weight multiset with n <= max_n, then seeded random instances with n <= sample_max_n."""
    for n in range(1, max_n + 1):
        for weights in combinations_with_replacement(range(max_weight + 1), n):
            yield PartitionInstance(weights)
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(samples):
        n = int(rng.integers(1, sample_max_n + 1))
        yield PartitionInstance(tuple(int(w) for w in rng.integers(0, max_weight + 1, size=n)))


# Harness

@dataclass
class Disagreement:
    """One decided verdict contradicting the ground truth."""
    instance: Any
    stage: str
    oracle: str
    expected: bool
    verdict: Verdict

    def render(self) -> str:
        expected = "satisfiable" if self.expected else "unsatisfiable"
        return (f"[{self.stage}/{self.oracle}] {self.instance}: expected {expected}, "
                f"got {self.verdict.status.value} ({self.verdict.reason})")


@dataclass
class HarnessFailure:
    """An encoder, squarer or oracle crashing on an instance it should handle."""
    instance: Any
    stage: str
    step: str
    error: str

    def render(self) -> str:
        return f"[{self.stage}/{self.step}] {self.instance}: crashed with {self.error}"


@dataclass
class OracleTally:
    agree: int = 0
    disagree: int = 0
    indeterminate: int = 0
    skipped: int = 0

    @property
    def total(self) -> int:
        return self.agree + self.disagree + self.indeterminate


@dataclass
class HarnessReport:
    """Counters per stage/oracle plus every disagreement and crash found."""
    instances: int = 0
    tallies: Dict[str, OracleTally] = field(default_factory=dict)
    disagreements: List[Disagreement] = field(default_factory=list)
    failures: List[HarnessFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.failures

    @property
    def indeterminate_rate(self) -> float:
        total = sum(t.total for t in self.tallies.values())
        if not total:
            return 0.0
        return sum(t.indeterminate for t in self.tallies.values()) / total

    def tally(self, key: str) -> OracleTally:
        return self.tallies.setdefault(key, OracleTally())

    def render(self) -> str:
        lines = [f"instances: {self.instances}"]
        for key in sorted(self.tallies):
            t = self.tallies[key]
            lines.append(f"{key}: agree={t.agree} disagree={t.disagree} "
                         f"indeterminate={t.indeterminate} skipped={t.skipped}")
        lines.append(f"indeterminate rate: {self.indeterminate_rate:.3f}")
        lines += [d.render() for d in self.disagreements]
        lines += [f.render() for f in self.failures]
        if self.ok:
            lines.append("OK")
        else:
            lines.append(f"FAILED: {len(self.disagreements)} disagreements, {len(self.failures)} crashes")
        return "\n".join(lines)


def equivalence_harness(corpus: Iterable[Any],
                        ground_truth: Callable[[Any], bool],
                        encoder: Callable[[Any], PolySystem],
                        squarers: Optional[Mapping[str, Callable[[PolySystem], PolySystem]]] = None,
                        oracles: Optional[Mapping[str, Oracle]] = None) -> HarnessReport:
    """
    Check every oracle on the encoded system and on each squared variant.

    An oracle raising VerificationError has declared the system out of scope and
    counts as skipped; BudgetExceededError counts as Indeterminate. Any other
    exception, from an oracle or a squarer, is recorded as a crash and fails the
    report. Indeterminate verdicts never count as disagreements.

    Args:
        corpus: Source instances
        ground_truth: Combinatorial satisfiability of an instance
        encoder: Instance -> polynomial system
        squarers: Named transformations applied to the encoded system
        oracles: Named oracles, structured sign oracle when None

    Returns:
        HarnessReport; report.ok is False iff some decided verdict was wrong or something crashed
    """
    oracles = oracles or {"structured": structured_sign_oracle}
    squarers = squarers or {}
    report = HarnessReport()

    def crashed(instance: Any, stage: str, step: str, error: Exception):
        report.failures.append(HarnessFailure(instance, stage, step, f"{type(error).__name__}: {error}"))
        logger.error(f"Crash: {report.failures[-1].render()}")

    for instance in corpus:
        report.instances += 1
        expected = ground_truth(instance)
        try:
            encoded = encoder(instance)
        except Exception as e:
            crashed(instance, "encoded", "encoder", e)
            continue
        stages = {"encoded": encoded}
        for name, squarer in squarers.items():
            try:
                stages[name] = squarer(encoded)
            except Exception as e:
                crashed(instance, name, "squarer", e)

        for stage, system in stages.items():
            for name, oracle in oracles.items():
                tally = report.tally(f"{stage}/{name}")
                try:
                    verdict = oracle(system)
                except BudgetExceededError as e:
                    logger.debug(f"{name} ran out of budget on {stage} of {instance}: {e}")
                    tally.indeterminate += 1
                    continue
                except VerificationError as e:
                    logger.debug(f"{name} skipped {stage} of {instance}: {e}")
                    tally.skipped += 1
                    continue
                except Exception as e:
                    crashed(instance, stage, name, e)
                    continue
                if verdict.status is VerdictStatus.INDETERMINATE:
                    tally.indeterminate += 1
                elif verdict.is_satisfiable == expected:
                    tally.agree += 1
                else:
                    tally.disagree += 1
                    report.disagreements.append(Disagreement(instance, stage, name, expected, verdict))
                    logger.warning(f"Disagreement: {report.disagreements[-1].render()}")

    logger.info(f"✅ Harness finished: {report.instances} instances, {len(report.disagreements)} disagreements, "
                f"{len(report.failures)} crashes")
    return report


def _named_oracles(oracle_names: Sequence[str], config: Config) -> Dict[str, Oracle]:
    unknown = [name for name in oracle_names if name not in ORACLE_NAMES]
    if unknown or not oracle_names:
        raise VerificationError(f"unknown oracles {unknown}; choose from {', '.join(ORACLE_NAMES)}")
    return {name: (lambda sys, name=name: decide(sys, name, config)) for name in oracle_names}


def boolsys_equivalence(ctx: FieldCtx, max_vars: int, max_equations: int,
                        oracle_names: Sequence[str] = ("structured",),
                        config: Optional[Config] = None,
                        lambda_value: Optional[int] = None, strict: bool = True) -> HarnessReport:
    """
    The Boolsys acceptance run over one field: gadget encoding, then the lambda
    chain and (in positive characteristic) the ground-field chain.
    """
    config = config or Config()
    if ctx.is_rational:
        SquaringPlan.lambda_int(lambda_value if lambda_value is not None else config.DEFAULT_LAMBDA, strict)

    def lambda_stage(sys: PolySystem) -> PolySystem:
        return lambda_chain_square(sys, lambda_plan_for(sys, lambda_value, strict))

    squarers: Dict[str, Callable[[PolySystem], PolySystem]] = {"lambda": lambda_stage}
    if ctx.is_prime_field:
        squarers["ground"] = ground_field_square
    oracles = _named_oracles(oracle_names, config)

    logger.info(f"🔍 Boolsys equivalence over {ctx}: n <= {max_vars}, <= {max_equations} equations")
    return equivalence_harness(
        boolsys_corpus(max_vars, max_equations),
        lambda inst: boolsys_brute_force(inst) is not None,
        lambda inst: boolsys_to_system(inst, ctx),
        squarers,
        oracles,
    )


def partition_equivalence(max_n: int, max_weight: int, samples: int = 0, seed: int = 0,
                          oracle_names: Sequence[str] = ("structured",),
                          config: Optional[Config] = None) -> Dict[str, HarnessReport]:
    """Both Partition encodings against the subset-sum oracle, one report per encoder."""
    config = config or Config()
    oracles = _named_oracles(oracle_names, config)
    encoders = {"partition": partition_to_system, "partition-bounded": partition_bounded_system}
    reports = {}
    for label, encoder in encoders.items():
        logger.info(f"🔍 {label} equivalence: n <= {max_n}, weights <= {max_weight}, {samples} samples")
        reports[label] = equivalence_harness(
            partition_corpus(max_n, max_weight, samples, seed=seed),
            lambda inst: partition_feasible(inst) is not None,
            encoder,
            oracles=oracles,
        )
    return reports


# Genericity of random squaring

@dataclass
class FailureStats:
    """Outcome counts of seeded random squarings of an unsatisfiable system."""
    field_size: int
    trials: int = 0
    spurious: int = 0
    indeterminate: int = 0

    @property
    def rate(self) -> float:
        decided = self.trials - self.indeterminate
        return self.spurious / decided if decided else 0.0


def genericity_failure_rate(sys: PolySystem, field_sizes: Sequence[int], trials: int, seed: int,
                            config: Optional[Config] = None,
                            oracle: Optional[Oracle] = None) -> Dict[int, FailureStats]:
    """
    Fraction of sampled alpha matrices whose squared system gains a root.

    sys must be unsatisfiable with equal degrees; every satisfiable output is spurious.
    """
    config = config or Config()
    oracle = oracle or (lambda squared: decide(squared, "auto", config))
    results = {}
    for size in field_sizes:
        plan = SquaringPlan.random(sys.ctx, seed, field_size=size)
        stats = FailureStats(size)
        for squared in random_square_trials(sys, plan, trials, config):
            verdict = oracle(squared)
            stats.trials += 1
            if verdict.status is VerdictStatus.INDETERMINATE:
                stats.indeterminate += 1
            elif verdict.is_satisfiable:
                stats.spurious += 1
        logger.info(f"Field size {size}: {stats.spurious}/{stats.trials} spurious")
        results[size] = stats
    return results
