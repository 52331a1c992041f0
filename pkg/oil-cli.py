#!/usr/bin/env python3
"""
OIL-CLI: verificación exacta de las ecuaciones de cierres de órbitas nilpotentes

Construye los conjuntos generadores, decide pertenencia a ideales homogéneos,
evalúa generadores sobre órbitas y ejecuta las comprobaciones de teoremas y
lemas, emitiendo informes JSON canónicos.

Códigos de salida: 0 verificado, 1 refutado, 2 inconcluso, 64 error de uso.
"""

import argparse
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from src.config.settings import Settings
from src.config.setup import setup_logging
from src.core.errors import OilError, ResourceLimitExceeded
from src.core.exterior import lemma5_spanning, lemma5_target
from src.core.genmat import GENERATOR_SET_ALIASES, GENERATOR_SET_LABELS, build_generator_set, theorem1_set
from src.core.idealmem import HomogeneousIdeal
from src.core.orbits import vanishing_report
from src.models.schemas import VerificationTask
from src.services.verification_service import VerificationService, combine_statuses
from src.utils.file_utils import (
    infer_dimension, load_generator_set, load_polynomials, read_polynomial_texts, write_text,
)
from src.utils.formatters import canonical_json, emit_report, format_status
from src.utils.validators import validate_dimension, validate_field_text, validate_input_file, validate_partition

EXIT_VERIFIED = 0
EXIT_REFUTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64

CLAIMS = [
    "theorem1", "theorem2", "lemma1", "lemma2", "lemma3", "lemma4", "lemma5", "lemma6",
    "minimality", "vanishing", "charp-explore", "charpoly", "remark-a", "remark-b", "crosscheck",
]

GENERATOR_SETS = [*GENERATOR_SET_LABELS, *GENERATOR_SET_ALIASES]


class UsageError(Exception):
    """Argumentos válidos para argparse pero fuera de rango."""


class UsageParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"❌ Error de uso: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


class OilCLI:
    """Clase principal para la interfaz de línea de comandos."""

    def __init__(self):
        """Inicializa la aplicación CLI."""
        self.settings = Settings()
        self.parser = self._setup_argument_parser()

    def _setup_argument_parser(self):
        """Configura el parser de argumentos y los subcomandos."""
        parser = UsageParser(
            description='OIL CLI - ecuaciones de cierres de órbitas nilpotentes, verificadas exactamente',
            formatter_class=argparse.RawDescriptionHelpFormatter
        )
        subparsers = parser.add_subparsers(dest='command', help='Comandos disponibles')

        self._setup_gens_parser(subparsers)
        self._setup_member_parser(subparsers)
        self._setup_orbit_parser(subparsers)
        self._setup_lemma5_parser(subparsers)
        self._setup_verify_parser(subparsers)

        return parser

    def _add_limit_arguments(self, subparser):
        subparser.add_argument('--max-degree', type=int, help='Grado máximo de las matrices de Macaulay')
        subparser.add_argument('--max-rows', type=int, help='Filas máximas por bloque')
        subparser.add_argument('--max-pairs', type=int, help='Pares S máximos en Buchberger')

    def _setup_gens_parser(self, subparsers):
        """Configura el parser para el comando 'gens'."""
        gens_parser = subparsers.add_parser('gens', help='Emitir un conjunto generador como JSON')
        gens_parser.add_argument('--set', required=True, choices=GENERATOR_SETS, help='Conjunto a construir')
        gens_parser.add_argument('--n', type=int, required=True, help='Tamaño de la matriz')
        gens_parser.add_argument('--e', type=int, help='Exponente e (theorem1, nonminimal)')
        gens_parser.add_argument('--size', type=int, help='Tamaño de los menores (set minors)')
        gens_parser.add_argument('--field', default='q', help="Cuerpo: 'q' o 'fp:P'")
        gens_parser.add_argument('--output', '-o', help='Fichero de salida (por defecto stdout)')

    def _setup_member_parser(self, subparsers):
        """Configura el parser para el comando 'member'."""
        member_parser = subparsers.add_parser('member', help='Decidir pertenencia a un ideal homogéneo')
        member_parser.add_argument('--ideal', required=True, help='Fichero con los generadores')
        member_parser.add_argument('--poly', required=True, help='Fichero con el polinomio objetivo')
        member_parser.add_argument('--field', default='q', help="Cuerpo: 'q' o 'fp:P'")
        member_parser.add_argument('--n', type=int, help='Tamaño de la matriz (por defecto se infiere)')
        member_parser.add_argument('--witness', action='store_true', help='Incluir la combinación testigo')
        member_parser.add_argument('--report', help='Escribir el resultado en este fichero')
        self._add_limit_arguments(member_parser)

    def _setup_orbit_parser(self, subparsers):
        """Configura el parser para el comando 'orbit'."""
        orbit_parser = subparsers.add_parser('orbit', help='Evaluar generadores sobre una órbita nilpotente')
        orbit_parser.add_argument('--lambda', dest='lam', required=True, help='Partición, p. ej. 2,1')
        orbit_parser.add_argument('--n', type=int, required=True, help='Tamaño de la matriz')
        orbit_parser.add_argument('--field', default='q', help="Cuerpo: 'q' o 'fp:P'")
        orbit_parser.add_argument('--samples', type=int, help='Número de conjugados aleatorios')
        orbit_parser.add_argument('--seed', type=int, help='Semilla')
        orbit_parser.add_argument('--gens', help='Fichero de generadores (por defecto theorem1 con --e)')
        orbit_parser.add_argument('--e', type=int, help='Exponente e si no se da --gens')
        orbit_parser.add_argument('--report', help='Escribir el informe en este fichero')

    def _setup_lemma5_parser(self, subparsers):
        """Configura el parser para el comando 'lemma5'."""
        lemma5_parser = subparsers.add_parser('lemma5', help='Rango de las imágenes de psi(r,m)')
        lemma5_parser.add_argument('--n', type=int, required=True, help='Dimensión de E')
        lemma5_parser.add_argument('--field', default='q', help="Cuerpo: 'q' o 'fp:P'")

    def _setup_verify_parser(self, subparsers):
        """Configura el parser para el comando 'verify'."""
        verify_parser = subparsers.add_parser('verify', help='Verificar un teorema o lema')
        verify_parser.add_argument('--claim', required=True, choices=CLAIMS, help='Afirmación a comprobar')
        verify_parser.add_argument('--n', type=int, help='Tamaño de la matriz')
        verify_parser.add_argument('--e', type=int, help='Exponente e')
        verify_parser.add_argument('--field', default='q', help="Cuerpo: 'q' o 'fp:P'")
        verify_parser.add_argument('--seed', type=int, help='Semilla')
        verify_parser.add_argument('--samples', type=int, help='Muestras por órbita')
        verify_parser.add_argument('--partition', help='Partición para la claim vanishing, p. ej. 3')
        verify_parser.add_argument('--witness', action='store_true', help='Incluir testigos de pertenencia')
        verify_parser.add_argument('--report', help='Escribir el informe en este fichero')
        verify_parser.add_argument('--timing', action='store_true', help='Incluir tiempos en el informe')
        verify_parser.add_argument('--grid', action='store_true', help='Ejecutar la rejilla por defecto')
        self._add_limit_arguments(verify_parser)

    # --- auxiliares -----------------------------------------------------

    def _limits(self, args):
        return self.settings.resource_limits(
            max_degree=getattr(args, 'max_degree', None),
            max_rows=getattr(args, 'max_rows', None),
            max_pairs=getattr(args, 'max_pairs', None),
        )

    def _output(self, text: str, path: str = None):
        if path:
            path = self.settings.report_path(path)
            write_text(path, text)
            print(f"✅ Escrito en {path}", file=sys.stderr)
        else:
            sys.stdout.write(text)

    def _input_file(self, path: str) -> Path:
        path = Path(path).expanduser()
        ok, message = validate_input_file(path)
        if not ok:
            raise UsageError(message)
        return path

    # --- comandos -------------------------------------------------------

    def generator_set(self, args) -> int:
        """Emite un conjunto generador."""
        field = validate_field_text(args.field)
        validate_dimension(args.n)
        if GENERATOR_SET_ALIASES.get(args.set, args.set) in ("theorem1", "nonminimal") and args.e is None:
            raise UsageError(f"el conjunto {args.set} necesita --e")
        gs = build_generator_set(args.set, args.n, args.e, field, size=args.size)
        self._output(canonical_json(gs.to_records()), args.output)
        print(f"✅ {gs.label}: {len(gs)} generadores, grados {gs.degrees()}", file=sys.stderr)
        return EXIT_VERIFIED

    def membership(self, args) -> int:
        """Decide si un polinomio pertenece al ideal."""
        field = validate_field_text(args.field)
        ideal_path = self._input_file(args.ideal)
        poly_path = self._input_file(args.poly)
        n = args.n
        if n is None:
            # el índice mayor de los dos ficheros fija n
            n = infer_dimension(read_polynomial_texts(ideal_path) + read_polynomial_texts(poly_path))
        gens = load_polynomials(ideal_path, field, n)
        if not gens:
            raise UsageError(f"{ideal_path} no contiene generadores")
        targets = load_polynomials(poly_path, field, n)
        if not targets:
            raise UsageError(f"{poly_path} no contiene polinomios")
        ideal = HomogeneousIdeal(gens, field, n, self._limits(args))
        results = [ideal.membership(t, witness=args.witness) for t in targets]
        statuses = [r.status for r in results]
        if "inconclusive" in statuses:
            code = EXIT_INCONCLUSIVE
        elif "non-member" in statuses:
            code = EXIT_REFUTED
        else:
            code = EXIT_VERIFIED
        data = {
            "schema": 1,
            "field": field.label,
            "n": n,
            "results": [dict(r.model_dump(mode="json", exclude_none=True), polynomial=t.to_text())
                        for r, t in zip(results, targets)],
        }
        self._output(canonical_json(data), args.report)
        for r, t in zip(results, targets):
            print(f"{format_status(r.status)}: {t.to_text()}", file=sys.stderr)
        return code

    def orbit(self, args) -> int:
        """Evalúa generadores sobre conjugados de la matriz de Jordan."""
        field = validate_field_text(args.field)
        validate_dimension(args.n)
        lam = validate_partition(args.lam, args.n)
        if args.gens:
            gs = load_generator_set(self._input_file(args.gens), field, args.n)
        elif args.e is not None:
            validate_dimension(args.n, args.e)
            gs = theorem1_set(args.n, args.e, field)
        else:
            raise UsageError("orbit necesita --gens o --e")
        samples = args.samples or self.settings.DEFAULT_SAMPLES
        seed = self.settings.DEFAULT_SEED if args.seed is None else args.seed
        report = vanishing_report(gs, lam, samples, seed)
        data = dict(report.model_dump(mode="json"), schema=1)
        self._output(canonical_json(data), args.report)
        print(format_status("verified" if report.all_zero else "refuted")
              + f": {gs.label} sobre O({lam})", file=sys.stderr)
        return EXIT_VERIFIED if report.all_zero else EXIT_REFUTED

    def lemma5(self, args) -> int:
        """Comprueba el rango de las imágenes de psi(r,m)."""
        field = validate_field_text(args.field)
        validate_dimension(args.n)
        rank, full = lemma5_spanning(args.n, field)
        m, target = lemma5_target(args.n)
        data = {"schema": 1, "n": args.n, "m": m, "field": field.label,
                "rank": rank, "target": target, "full": full}
        self._output(canonical_json(data))
        print(format_status("verified" if full else "refuted") + f": rango {rank} de {target}", file=sys.stderr)
        return EXIT_VERIFIED if full else EXIT_REFUTED

    def verify(self, args) -> int:
        """Ejecuta una claim (o la rejilla por defecto)."""
        service = VerificationService(self.settings)
        seed = self.settings.DEFAULT_SEED if args.seed is None else args.seed
        samples = args.samples or self.settings.DEFAULT_SAMPLES
        limits = self._limits(args)
        timing = args.timing or self.settings.REPORT_TIMING
        if args.grid:
            tasks = service.grid_tasks(args.claim, seed, samples, limits)
            reports = service.run_grid(tasks, timing=timing)
            status = combine_statuses(r["status"] for r in reports)
            data = {"schema": 1, "claim": args.claim, "status": status, "reports": reports}
            self._output(canonical_json(data), args.report)
            print(f"{format_status(status)}: {len(reports)} tareas de {args.claim}", file=sys.stderr)
            return {"verified": EXIT_VERIFIED, "refuted": EXIT_REFUTED}.get(status, EXIT_INCONCLUSIVE)
        if args.n is None:
            raise UsageError("verify necesita --n (o --grid)")
        partition = None
        if args.partition:
            partition = validate_partition(args.partition, args.n).to_list()
        task = VerificationTask(
            claim=args.claim, n=args.n, e=args.e, field=args.field, seed=seed, samples=samples,
            partition=partition, witness=args.witness, limits=limits,
        )
        validate_field_text(task.field)
        report = service.run_task(task, timing=timing)
        if args.report:
            path = emit_report(report, self.settings.report_path(args.report))
            print(f"✅ Informe escrito en {path}", file=sys.stderr)
        else:
            sys.stdout.write(canonical_json(report.to_dict()))
        print(f"{format_status(report.status)}: {args.claim} (n={args.n}, e={args.e}, {args.field})",
              file=sys.stderr)
        return report.exit_code

    def run(self, argv=None) -> int:
        """Ejecuta la aplicación CLI."""
        args = self.parser.parse_args(argv)
        setup_logging(self.settings.LOGS_DIR, self.settings.LOG_LEVEL, self.settings.LOG_TO_FILE)

        # Mapeo de comandos a métodos de clase
        command_handlers = {
            'gens': self.generator_set,
            'member': self.membership,
            'orbit': self.orbit,
            'lemma5': self.lemma5,
            'verify': self.verify,
        }

        if args.command not in command_handlers:
            self.parser.print_help()
            return EXIT_USAGE
        try:
            return command_handlers[args.command](args)
        except ResourceLimitExceeded as e:
            logging.warning(f"Límite de recursos en {args.command}: {e}")
            print(f"⚠️ Límite de recursos: {e}", file=sys.stderr)
            return EXIT_INCONCLUSIVE
        except (UsageError, OilError, ValidationError) as e:
            logging.error(f"Error de uso en {args.command}: {e}")
            print(f"❌ Error de uso: {e}", file=sys.stderr)
            return EXIT_USAGE
        except OSError as e:
            logging.error(f"Error de entrada/salida en {args.command}: {e}")
            print(f"❌ Error de entrada/salida: {e}", file=sys.stderr)
            return EXIT_INCONCLUSIVE


def main():
    """Punto de entrada principal del programa."""
    cli = OilCLI()
    sys.exit(cli.run())


if __name__ == "__main__":
    main()
