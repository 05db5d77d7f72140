#!/usr/bin/env python3
"""
Командная строка: аннуляторы, функции Гильберта, нормализация 2-растянутых алгебр,
касательные размерности и воспроизведение отчётов о препятствиях.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from dotenv import load_dotenv

from tools.apolarity import DualGenerator, Ideal, annihilator, hilbert_from_tdf
from tools.errors import ConfigError, MacaulayError, PolySyntaxError
from tools.groebner import ORDER_KINDS, TermOrder, quotient_hilbert, reduced_groebner
from tools.obstruction import (
    ALGEBRA_LENGTH,
    CASES,
    PUBLISHED,
    UNOBSTRUCTED_DIMENSION,
    BVector,
    format_table,
    reproduce_case,
    tangent_space,
    verify_published_generators,
)
from tools.poly_core import format_rational, parse_poly, parse_rational, render_poly
from tools.report_storage import save_report, write_json
from tools.settings import load_settings
from tools.structure_theorem import normalize_2stretched
from tools.trace import enable_tracing

load_dotenv()


def _rational(text: str):
    try:
        return parse_rational(text)
    except MacaulayError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _dual(args: argparse.Namespace) -> DualGenerator:
    return DualGenerator(parse_poly(args.dual, args.n, "y"))


def run_ann(args: argparse.Namespace) -> int:
    J = annihilator(_dual(args))
    if args.groebner:
        order = TermOrder.named(args.order)
        gb = reduced_groebner(J.generators, order, J.truncation)
        print(f"Базис Грёбнера ({order}):")
        for g in gb:
            print(f"  {render_poly(g)}")
        return 0
    print(f"Ann(F), усечение S_+^{J.truncation}:")
    for g in J.generators:
        print(f"  {render_poly(g)}")
    return 0


def run_hilbert(args: argparse.Namespace) -> int:
    if args.dual is not None:
        H = hilbert_from_tdf(_dual(args))
    else:
        ideal = Ideal.from_strings(args.ideal.split(","), args.n)
        H = quotient_hilbert(reduced_groebner(ideal.generators, TermOrder.named(args.order)))
    print(f"{H}, dim {H.total()}")
    return 0


def run_normalize(args: argparse.Namespace) -> int:
    cert = normalize_2stretched(_dual(args))
    print(f"H = {cert.hilbert}")
    print(f"Без экзотических слагаемых: {render_poly(cert.exotic.F.F)}")
    print(f"F_simple = {render_poly(cert.F_simple.F)}")
    print(f"Автоморфизм: {cert.automorphism}")
    if cert.x1_shift:
        shift = " + ".join(f"{format_rational(c)}*x{k}" for k, c in cert.x1_shift.items())
        print(f"Линейная замена: x1 -> x1 + {shift}")
    if cert.used_x1_column:
        print("Решение использует b_(g,1) != 0")
    print(f"Проверка: ideal_equal={cert.ideal_equal}, hilbert_equal={cert.hilbert_equal}")
    return 0 if cert.verified else 1


def run_tangent(args: argparse.Namespace) -> int:
    space = tangent_space(_dual(args))
    length = space.hilbert_J.total()
    if length != ALGEBRA_LENGTH:
        print(f"N = {space.N} (dim S/J = {length}, порог {UNOBSTRUCTED_DIMENSION} не применяется)")
        return 0
    print(f"N = {space.N}, {'obstructed' if space.obstructed else 'unobstructed'}")
    return 0


def run_reproduce(args: argparse.Namespace) -> int:
    settings = load_settings()
    seed = settings.seed if args.seed is None else args.seed
    reports = reproduce_case(args.case, args.samples, seed, workers=args.workers, progress=True)
    table = format_table(reports)
    print(table)
    records = [r.to_record() for r in reports]
    path = write_json(records, args.json) if args.json else save_report(args.case, records, table)
    print(f"Отчёт: {path}")
    failed = [r.index for r in reports if not r.agree]
    if failed:
        print(f"Расхождения в образцах: {failed}", file=sys.stderr)
        return 1
    return 0


def run_verify_gens(args: argparse.Namespace) -> int:
    b = BVector(tuple(args.b)) if args.b else None
    ok = verify_published_generators(args.case, b, args.t)
    print("true" if ok else "false")
    return 0 if ok else 1


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Обратные системы Маколея и 2-растянутые горенштейновы алгебры."
    )
    parser.add_argument("--trace", action="store_true", help="Печатать шаги вычислений в stderr.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def dual_args(sub: argparse.ArgumentParser, required: bool = True) -> None:
        sub.add_argument("--dual", required=required, help='Многочлен от y, например "y1^5 + y1^3*y2".')
        sub.add_argument("--n", type=int, required=True, help="Число переменных.")

    ann = subparsers.add_parser("ann", help="Образующие Ann(F).")
    dual_args(ann)
    ann.add_argument("--groebner", action="store_true", help="Печатать приведённый базис Грёбнера.")
    ann.add_argument("--order", choices=ORDER_KINDS, default="product")

    hilbert = subparsers.add_parser("hilbert", help="Функция Гильберта S/Ann(F) или S/I.")
    dual_args(hilbert, required=False)
    hilbert.add_argument("--ideal", help="Образующие идеала через запятую.")
    hilbert.add_argument("--order", choices=ORDER_KINDS, default="product")

    normalize = subparsers.add_parser("normalize", help="Нормальная форма 2-растянутой алгебры.")
    dual_args(normalize)

    tangent = subparsers.add_parser("tangent", help="N = dim S/J^2 - dim S/J.")
    dual_args(tangent)

    reproduce = subparsers.add_parser("reproduce", help="Проверка предсказаний о препятствиях.")
    reproduce.add_argument("--case", choices=list(CASES), required=True)
    reproduce.add_argument("--samples", type=int, default=10)
    reproduce.add_argument("--seed", type=int, default=None, help="По умолчанию MACAULAY_SEED.")
    reproduce.add_argument("--json", type=Path, default=None, help="Куда записать JSON-отчёт.")
    reproduce.add_argument("--workers", type=int, default=None, help="По умолчанию MACAULAY_WORKERS.")

    verify = subparsers.add_parser("verify-gens", help="Сверка опубликованного списка образующих.")
    verify.add_argument("--case", choices=list(PUBLISHED), required=True)
    verify.add_argument("--b", type=_rational, nargs=6, default=None)
    verify.add_argument("--t", type=_rational, default=None)
    return parser


COMMANDS = {
    "ann": run_ann,
    "hilbert": run_hilbert,
    "normalize": run_normalize,
    "tangent": run_tangent,
    "reproduce": run_reproduce,
    "verify-gens": run_verify_gens,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    if args.command == "hilbert" and (args.dual is None) == (args.ideal is None):
        parser.error("hilbert: нужен ровно один из --dual и --ideal")
    if args.command == "reproduce" and args.samples < 1:
        parser.error("--samples должно быть >= 1")
    if args.trace:
        enable_tracing(True)
    try:
        return COMMANDS[args.command](args)
    except PolySyntaxError as exc:
        print(f"Ошибка разбора: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"Ошибка настроек: {exc}", file=sys.stderr)
        return 2
    except MacaulayError as exc:
        print(f"Ошибка: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
