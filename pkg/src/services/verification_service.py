import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Dict, List, NamedTuple, Optional

import numpy as np
import sympy
from pydantic import ValidationError

from ..core.errors import ResourceLimitExceeded
from ..core.exterior import lemma1_ranks, lemma5_target, lemma5_weight_blocks, psi_consistency
from ..core.fields import FieldSpec, gcd_binomials, parse_field
from ..core.genmat import (
    GenericMatrix, nonminimal_set, relation_members, remark_a_comparison,
    remark_b_ranks, theorem1_set, theorem2_set,
)
from ..core.groebner import buchberger
from ..core.idealmem import HomogeneousIdeal
from ..core.linalg import polynomial_span_rank
from ..core.orbits import Partition, closure_report, dominance_leq, partition_mu, vanishing_report
from ..core.poly import Polynomial, monomials_of_degree
from ..models.schemas import MembershipResult, Report, ReportItem, VerificationTask
from ..utils.time_utils import Stopwatch

# rejilla de escritorio por defecto
GRID_DIMENSIONS = (2, 3, 4)
GRID_E = (2, 3)
GRID_FIELDS = ("q", "fp:2", "fp:3")

CROSSCHECK_INSTANCES = 50


class ClaimOutcome(NamedTuple):
    status: str
    items: List[ReportItem]
    summary: Dict
    witness: Optional[Dict] = None


def aggregate_status(items: List[ReportItem]) -> str:
    return combine_statuses(item.status for item in items)


def combine_statuses(statuses) -> str:
    """refuted pesa más que inconclusive, y este más que verified."""
    statuses = set(statuses)
    if "refuted" in statuses:
        return "refuted"
    if "inconclusive" in statuses:
        return "inconclusive"
    return "verified"


def membership_item(ident: str, result: MembershipResult, polynomial: Polynomial = None) -> ReportItem:
    """Construir un ReportItem desde una respuesta de pertenencia."""
    status = {"member": "verified", "non-member": "refuted", "inconclusive": "inconclusive"}[result.status]
    witness = None
    if result.witness is not None:
        witness = [term.model_dump() for term in result.witness]
    elif status == "refuted" and polynomial is not None:
        witness = {
            "polynomial": polynomial.to_text(),
            "degree": result.degree,
            "rank": result.rank,
            "rank_with_target": result.rank_with_target,
        }
    details = {"rank_with_target": result.rank_with_target}
    if result.reason:
        details["reason"] = result.reason
    return ReportItem(
        ident=ident, status=status, degree=result.degree,
        member=None if status == "inconclusive" else result.is_member,
        rows=result.rows, cols=result.cols, rank=result.rank,
        details=details, witness=witness,
    )


def first_witness(items: List[ReportItem]) -> Optional[Dict]:
    for item in items:
        if item.status == "refuted":
            return {"item": item.ident, "data": item.witness}
    return None


def to_sympy(poly: Polynomial, symbols) -> sympy.Expr:
    expr = sympy.Integer(0)
    for exps, c in poly.raw_terms.items():
        term = sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Integer(c)
        for v, e in enumerate(exps):
            if e:
                term *= symbols[v] ** e
        expr += term
    return expr


def random_homogeneous(rng, field: FieldSpec, n: int, degree: int, terms: int) -> Polynomial:
    basis = monomials_of_degree(n, degree)
    picks = rng.choice(len(basis), size=min(terms, len(basis)), replace=False)
    coeffs = {}
    for idx in sorted(int(i) for i in picks):
        c = 0
        while not field.coerce(c):
            c = int(rng.integers(-3, 4))
        coeffs[basis[idx]] = c
    return Polynomial(field, n, coeffs)


def _run_task_worker(task_data: Dict, timing: bool) -> Dict:
    from ..config.settings import Settings

    service = VerificationService(Settings())
    return service.run_task(VerificationTask(**task_data), timing=timing).to_dict()


class VerificationService:
    def __init__(self, settings):
        self.settings = settings
        self.handlers: Dict[str, Callable[[VerificationTask, FieldSpec], ClaimOutcome]] = {
            "theorem1": self.check_ideal_equality,
            "theorem2": self.check_square_zero_generation,
            "lemma1": self.check_v_space_dimensions,
            "lemma2": self.check_v_space_ascent,
            "lemma3": self.check_relations_in_ideal,
            "lemma4": self.check_minors_in_ideal,
            "lemma5": self.check_psi_spanning,
            "lemma6": self.check_binomial_gcd,
            "minimality": self.check_minimality,
            "vanishing": self.check_vanishing,
            "charp-explore": self.explore_positive_characteristic,
            "charpoly": self.check_characteristic_polynomial,
            "remark-a": self.compare_first_v_space,
            "remark-b": self.check_v_space_chain,
            "crosscheck": self.cross_check_engines,
        }

    # --- despacho -------------------------------------------------------

    def run_task(self, task: VerificationTask, timing: bool = None) -> Report:
        """Ejecutar una tarea validada y devolver un informe determinista."""
        timing = self.settings.REPORT_TIMING if timing is None else timing
        field = parse_field(task.field)
        watch = Stopwatch()
        logging.info(f"Iniciando claim {task.claim} (n={task.n}, e={task.e}, field={field})")
        try:
            outcome = self.handlers[task.claim](task, field)
        except ResourceLimitExceeded as e:
            logging.warning(f"Claim {task.claim} inconclusa: {e}")
            outcome = ClaimOutcome("inconclusive", [], {"reason": str(e), "limit": e.limit, "value": e.value})
        except Exception as e:
            logging.error(f"Error ejecutando claim {task.claim}: {str(e)}")
            raise
        watch.lap("claim")
        logging.info(f"Claim {task.claim} terminada: {outcome.status}")
        return Report(
            task=task.model_dump(mode="json"),
            status=outcome.status,
            seed=task.seed,
            items=outcome.items,
            summary=outcome.summary,
            witness=outcome.witness,
            timing=watch.as_dict() if timing else None,
        )

    def grid_tasks(self, claim: str, seed: int, samples: int, limits) -> List[VerificationTask]:
        tasks = []
        for n in GRID_DIMENSIONS:
            for e in GRID_E:
                for field in GRID_FIELDS:
                    try:
                        tasks.append(VerificationTask(claim=claim, n=n, e=e, field=field, seed=seed,
                                                      samples=samples, limits=limits))
                    except ValidationError:
                        continue
        # claims sin e se repetirían por cada e
        unique, seen = [], set()
        for task in tasks:
            key = (task.n, task.e if task.claim in ("theorem1", "minimality", "vanishing") else None, task.field)
            if key not in seen:
                seen.add(key)
                unique.append(task)
        return unique

    def run_grid(self, tasks: List[VerificationTask], timing: bool = None) -> List[Dict]:
        """Ejecutar tareas en un pool de procesos; los resultados vuelven en orden de envío."""
        timing = self.settings.REPORT_TIMING if timing is None else timing
        workers = max(1, min(self.settings.THREADS, len(tasks)))
        payload = [t.model_dump() for t in tasks]
        if workers == 1:
            return [_run_task_worker(data, timing) for data in payload]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_task_worker, payload, [timing] * len(payload)))

    # --- teoremas -------------------------------------------------------

    def _ideal(self, polys, field: FieldSpec, n: int, task: VerificationTask) -> HomogeneousIdeal:
        return HomogeneousIdeal(polys, field, n, task.limits, seed=task.seed)

    def _membership_run(self, ideal: HomogeneousIdeal, members, task: VerificationTask, prefix: str = ""):
        items = []
        for member in members:
            result = ideal.membership(member.polynomial, witness=task.witness)
            items.append(membership_item(prefix + member.ident, result, member.polynomial))
        return items

    def check_ideal_equality(self, task: VerificationTask, field: FieldSpec) -> ClaimOutcome:
        """Comprobar las dos inclusiones entre theorem1 y nonminimal."""
        gm = GenericMatrix(task.n, field)
        minimal = theorem1_set(task.n, task.e, field, gm)
        wide = nonminimal_set(task.n, task.e, field, gm)
        first = self._ideal(minimal.polynomials(), field, task.n, task)
        second = self._ideal(wide.polynomials(), field, task.n, task)
        items = self._membership_run(first, wide.members, task, "nonminimal⊆theorem1:")
        items += self._membership_run(second, minimal.members, task, "theorem1⊆nonminimal:")
        summary = {"theorem1_size": len(minimal), "nonminimal_size": len(wide)}
        return ClaimOutcome(aggregate_status(items), items, summary, first_witness(items))

    def _square_zero_ideal(self, task: VerificationTask, field: FieldSpec, gm: GenericMatrix):
        return self._ideal(theorem2_set(task.n, field, gm).polynomials(), field, task.n, task)

    def _relations(self, gm: GenericMatrix, field: FieldSpec):
        from ..models.generator_set import GeneratorSet

        gs = GeneratorSet(label="relations", n=gm.n, field=field)
        for family, poly, params in relation_members(gm):
            gs.add(family, poly, **params)
        return gs

    def _minors(self, gm: GenericMatrix, field: FieldSpec):
        from ..models.generator_set import GeneratorSet

        gs = GeneratorSet(label="minors", n=gm.n, field=field)
        for rows, cols, poly in gm.minors_of_size(gm.n // 2 + 1):
            gs.add("minor", poly, rows=list(rows), cols=list(cols))
        return gs

    def check_relations_in_ideal(self, task: VerificationTask, field: FieldSpec) -> ClaimOutcome:
        gm = GenericMatrix(task.n, field)
        ideal = self._square_zero_ideal(task, field, gm)
        relations = self._relations(gm, field)
        items = self._membership_run(ideal, relations.members, task)
        return ClaimOutcome(aggregate_status(items), items, {"relations": len(relations)}, first_witness(items))

    def check_minors_in_ideal(self, task: VerificationTask, field: FieldSpec) -> ClaimOutcome:
        """Los menores de tamaño floor(n/2)+1 están en el ideal y en el generado por los Rel(r, m)."""
        gm = GenericMatrix(task.n, field)
        ideal = self._square_zero_ideal(task, field, gm)
        minors = self._minors(gm, field)
        items = self._membership_run(ideal, minors.members, task)
        m = task.n // 2 + 1
        relations = [member.polynomial for member in self._relations(gm, field).members
                     if member.params["p"] == m]
        rank_rel = polynomial_span_rank(relations, field)
        rank_all = polynomial_span_rank(relations + minors.polynomials(), field)
        span_ok = rank_rel == rank_all
        items.append(ReportItem(
            ident=f"span(minors{m}) ⊆ span(Rel(r,{m}))", status="verified" if span_ok else "refuted",
            degree=m, rank=rank_rel, details={"rank_with_minors": rank_all},
            witness=None if span_ok else {"rank_relations": rank_rel, "rank_with_minors": rank_all},
        ))
        return ClaimOutcome(aggregate_status(items), items, {"minor_size": m, "minors": len(minors)},
                            first_witness(items))

    def check_square_zero_generation(self, task: VerificationTask, field: FieldSpec) -> ClaimOutcome:
        """Todo Rel(r,p) y todo menor de tamaño floor(n/2)+1 está en <T_1..T_n, entradas de Phi^2>."""
        gm = GenericMatrix(task.n, field)
        ideal = self._square_zero_ideal(task, field, gm)
        items = self._membership_run(ideal, self._relations(gm, field).members, task)
        items += self._membership_run(ideal, self._minors(gm, field).members, task)
        return ClaimOutcome(aggregate_status(items), items, {"checked": len(items)}, first_witness(items))

    def check_minimality(self, task: VerificationTask, field: FieldSpec) -> ClaimOutcome:
        n, e = task.n, task.e
        gs = theorem1_set(n, e, field)
        ideal = self._ideal(gs.polynomials(), field, n, task)
        items = []
        for d in range(1, e + 2):
            expected = 1 if d < e else (n * n if d == e else 0)
            count = ideal.minimal_generator_count(d)
            ok = count == expected
            items.append(ReportItem(
                ident=f"degree {d}", status="verified" if ok else "refuted", degree=d,
                details={"count": count, "expected": expected},
                witness=None if ok else {"degree": d, "count": count, "expected": expected},
            ))
        return ClaimOutcome(aggregate_status(items), items, {"generators": len(gs)}, first_witness(items))

    # --- lemas ----------------------------------------------------------

    def check_v_space_dimensions(self, task: VerificationTask, field: FieldSpec) -> ClaimOutcome:
        n = task.n
        items = []
        for p in range(1, n + 1):
            for i in range(0, p + 1):
                rank, expected = lemma1_ranks(i, p, n, field)
                ok = rank == expected
                items.append(ReportItem(
                    ident=f"V_{{{i},{p}}}", status="verified" if ok else "refuted", degree=p, rank=rank,
                    details={"expected": expected},
                    witness=None if ok else {"i": i, "p": p, "rank": rank, "expected": expected},
                ))
        return ClaimOutcome(aggregate_status(items), items, {"pairs": len(items)}, first_witness(items))

    def check_v_space_ascent(self, task: VerificationTask, field: FieldSpec) -> ClaimOutcome:
        """V_{i,p+1} dentro del ideal generado por V_{i,p}, 1 <= i <= p < n."""
        n = task.n
        gm = GenericMatrix(n, field)
        items = []
        for p in range(1, n):
            for i in range(1, p + 1):
                base = [poly for _, _, poly in gm.v_space_spanning_set(i, p)]
                ideal = self._ideal(base, field, n, task)
                for u, v, poly in gm.v_space_spanning_set(i, p + 1):
                    result = ideal.membership(poly, witness=task.witness)
                    ident = f"V_{{{i},{p + 1}}}(u={list(u)},v={list(v)}) ∈ <V_{{{i},{p}}}>"
                    items.append(membership_item(ident, result, poly))
        return ClaimOutcome(aggregate_status(items), items, {"checked": len(items)}, first_witness(items))

    def check_psi_spanning(self, task: VerificationTask, field: FieldSpec) -> ClaimOutcome:
        items = []
        for size in range(1, task.n + 1):
            m, target = lemma5_target(size)
            blocks = lemma5_weight_blocks(size, field)
            rank = sum(b["rank"] for b in blocks)
            blocks_full = all(b["rank"] == b["dimension"] for b in blocks)
            consistency = psi_consistency(size, field)
            ok = rank == target and blocks_full and all(consistency.values())
            items.append(ReportItem(
                ident=f"n={size}", status="verified" if ok else "refuted", rank=rank,
                details={"target": target, "m": m, "weight_blocks": len(blocks), **consistency},
                witness=None if ok else {"n": size, "rank": rank, "target": target, **consistency},
            ))
        return ClaimOutcome(aggregate_status(items), items, {"sizes": task.n}, first_witness(items))

    def check_binomial_gcd(self, task: VerificationTask, field: FieldSpec) -> ClaimOutcome:
        failures = [n for n in range(1, task.n + 1) if gcd_binomials(n) != 1]
        witness = None
        if failures:
            n = failures[0]
            witness = {"n": n, "gcd": gcd_binomials(n)}
        status = "refuted" if failures else "verified"
        return ClaimOutcome(status, [], {"checked": task.n, "failures": failures[:20]}, witness)

    # --- órbitas --------------------------------------------------------

    def _vanishing_sets(self, task: VerificationTask, field: FieldSpec):
        gm = GenericMatrix(task.n, field)
        sets = [theorem1_set(task.n, task.e, field, gm)]
        if task.e == 2:
            sets.append(theorem2_set(task.n, field, gm))
        return sets

    def check_vanishing(self, task: VerificationTask, field: FieldSpec) -> ClaimOutcome:
        """Con partición: los conjuntos se anulan en su órbita. Sin ella: la tabla de la clausura."""
        items = []
        if task.partition is not None:
            lam = Partition(parts=tuple(sorted(task.partition, reverse=True)))
            for gs in self._vanishing_sets(task, field):
                report = vanishing_report(gs, lam, task.samples, task.seed)
                items.append(ReportItem(
                    ident=f"{gs.label} on O({lam})", status="verified" if report.all_zero else "refuted",
                    details={"vanishing": report.vanishing}, witness=report.witness,
                ))
            mu = partition_mu(task.n, task.e)
            summary = {"mu": list(mu.parts), "dominated": dominance_leq(lam, mu)}
            return ClaimOutcome(aggregate_status(items), items, summary, first_witness(items))
        for gs in self._vanishing_sets(task, field):
            table = closure_report(gs, task.n, task.e, task.samples, task.seed)
            for row in table["rows"]:
                report = row["report"]
                lam = Partition(parts=tuple(row["partition"]))
                items.append(ReportItem(
                    ident=f"{gs.label} on O({lam})", status="verified" if row["ok"] else "refuted",
                    details={"dominated": row["dominated"], "all_zero": report.all_zero},
                    witness=report.witness if not row["ok"] or not report.all_zero else None,
                ))
        summary = {"mu": list(partition_mu(task.n, task.e).parts)}
        return ClaimOutcome(aggregate_status(items), items, summary, first_witness(items))

    # --- exploración y observaciones -------------------------------------

    def explore_positive_characteristic(self, task: VerificationTask, field: FieldSpec) -> ClaimOutcome:
        """Pertenencia de T_2..T_n a <T_1, entradas de Phi^2>; se registra, nunca se afirma."""
        gm = GenericMatrix(task.n, field)
        base = [gm.trace_invariant(1)] + [p for p in gm.matrix_power_entries(2) if not p.is_zero]
        ideal = self._ideal(base, field, task.n, task)
        items = []
        table = {}
        for i in range(2, task.n + 1):
            result = ideal.membership(gm.trace_invariant(i))
            item = membership_item(f"T_{i}", result)
            if item.status == "refuted":
                # una no pertenencia es un dato, no una refutación
                item.status = "verified"
            items.append(item)
            table[f"T_{i}"] = result.status
        return ClaimOutcome(aggregate_status(items), items, {"membership": table})

    def check_characteristic_polynomial(self, task: VerificationTask, field: FieldSpec) -> ClaimOutcome:
        n = task.n
        gm = GenericMatrix(n, field)
        items = []
        residual = gm.cayley_hamilton_residual()
        nonzero = [k for k, entry in enumerate(residual) if not entry.is_zero]
        items.append(ReportItem(
            ident="cayley-hamilton", status="refuted" if nonzero else "verified", degree=n,
            witness={"entry": [nonzero[0] // n + 1, nonzero[0] % n + 1],
                     "value": residual[nonzero[0]].to_text()} if nonzero else None,
        ))
        if field.is_rational:
            symbols = sympy.symbols(f"F0:{n * n}")
            x = sympy.Symbol("x")
            matrix = sympy.Matrix(n, n, symbols)
            det = sympy.expand((x * sympy.eye(n) + matrix).det(method="berkowitz"))
            expected = sympy.expand(sum(to_sympy(gm.invariant(i), symbols) * x ** (n - i) for i in range(n + 1)))
            difference = sympy.expand(det - expected)
            items.append(ReportItem(
                ident="det(xI+F)", status="verified" if difference == 0 else "refuted", degree=n,
                witness=None if difference == 0 else {"difference": str(difference)},
            ))
        return ClaimOutcome(aggregate_status(items), items, {"n": n}, first_witness(items))

    def compare_first_v_space(self, task: VerificationTask, field: FieldSpec) -> ClaimOutcome:
        """Comparar V_{1,p} con las entradas de Phi^p, como generados y como ideales."""
        items = []
        for p in range(2, task.n + 1):
            data = remark_a_comparison(p, task.n, field, task.limits)
            items.append(ReportItem(
                ident=f"p={p}", status="verified" if data["ideals_equal"] else "refuted", degree=p,
                rank=data["rank_v1"], details=data,
                witness=None if data["ideals_equal"] else data,
            ))
        return ClaimOutcome(aggregate_status(items), items, {"n": task.n}, first_witness(items))

    def check_v_space_chain(self, task: VerificationTask, field: FieldSpec) -> ClaimOutcome:
        items = []
        for p in range(1, task.n + 1):
            for i in range(1, p + 1):
                union, upper = remark_b_ranks(i, p, task.n, field)
                ok = union == upper
                items.append(ReportItem(
                    ident=f"V_{{{i - 1},{p}}} ⊆ V_{{{i},{p}}}", status="verified" if ok else "refuted",
                    degree=p, rank=upper, details={"rank_union": union},
                    witness=None if ok else {"i": i, "p": p, "rank_union": union, "rank": upper},
                ))
        return ClaimOutcome(aggregate_status(items), items, {"n": task.n}, first_witness(items))

    def cross_check_engines(self, task: VerificationTask, field: FieldSpec) -> ClaimOutcome:
        """Contrastar la pertenencia de Macaulay con formas normales de Buchberger en instancias aleatorias."""
        rng = np.random.default_rng(task.seed)
        n = task.n
        items = []
        agreements = 0
        for k in range(CROSSCHECK_INSTANCES):
            gens = [random_homogeneous(rng, field, n, int(rng.integers(1, 3)), int(rng.integers(1, 4)))
                    for _ in range(int(rng.integers(1, 4)))]
            gens = [g for g in gens if not g.is_zero]
            if not gens:
                continue
            degree = int(rng.integers(max(g.degree for g in gens), 4))
            if rng.random() < 0.5:
                target = Polynomial.zero(field, n)
                for g in gens:
                    if g.degree <= degree:
                        target = target + random_homogeneous(rng, field, n, degree - g.degree, 2) * g
                if target.is_zero:
                    target = random_homogeneous(rng, field, n, degree, 3)
            else:
                target = random_homogeneous(rng, field, n, degree, 3)
            ideal = self._ideal(gens, field, n, task)
            macaulay = ideal.membership(target)
            if macaulay.status == "inconclusive":
                items.append(membership_item(f"instance {k}", macaulay))
                continue
            basis = buchberger(gens, limits=task.limits, truncate=target.degree)
            normal = basis.contains(target)
            agree = normal == macaulay.is_member
            agreements += agree
            items.append(ReportItem(
                ident=f"instance {k}", status="verified" if agree else "refuted", degree=target.degree,
                member=macaulay.is_member,
                details={"generators": [g.to_text() for g in gens], "groebner_size": len(basis)},
                witness=None if agree else {"target": target.to_text(), "macaulay": macaulay.is_member,
                                            "groebner": normal},
            ))
        summary = {"instances": len(items), "agreements": agreements}
        return ClaimOutcome(aggregate_status(items), items, summary, first_witness(items))
