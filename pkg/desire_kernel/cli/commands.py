"""Batch command line: load a model, run one query, print one report.

Exit codes: 0 yes, 1 no, 2 usage or model error, 3 resource cap exceeded.
"""
import argparse
import logging
import sys
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any, TextIO

from injector import Injector
from pydantic import ValidationError

from desire_kernel.cli.report import Report, Timing, gamble_value, input_hash, set_value
from desire_kernel.components.cone.cone_component import ConeComponent
from desire_kernel.core.assessment import (
    CredalSet,
    GambleAssessment,
    OptionSet,
    OptionSetAssessment,
)
from desire_kernel.core.document import (
    Model,
    load_json,
    parse_gamble,
    parse_model,
    parse_option_set,
)
from desire_kernel.core.errors import (
    FamilyCapExceededError,
    ModelError,
    SelectionCapExceededError,
)
from desire_kernel.core.gamble import BackgroundOrdering, Gamble
from desire_kernel.core.rational import format_rational
from desire_kernel.core.verdict import UNBOUNDED, Bound, Verdict
from desire_kernel.di import create_application_injector
from desire_kernel.services.choice.certificate import CertificateDocument
from desire_kernel.services.choice.certificate_verifier import CertificateVerifier
from desire_kernel.services.choice.choice_service import ChoiceService
from desire_kernel.services.choice.selection import count_selections
from desire_kernel.services.operators.operators_service import (
    FiniteFamily,
    OperatorsService,
)
from desire_kernel.settings.settings import Settings
from desire_kernel.utils.progress import human_time

logger = logging.getLogger(__name__)

VERBS = (
    "check",
    "entail",
    "entail-mixing",
    "choose",
    "e-admit",
    "lowprev",
    "margin",
    "total",
    "operators",
    "verify-cert",
)
OPERATORS = ("translate", "rn", "su", "rs", "rp", "chull")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("model", type=Path, help="Path to the JSON model document")
    set_source = common.add_mutually_exclusive_group()
    set_source.add_argument("--set", help="Option set as inline JSON")
    set_source.add_argument("--set-file", type=Path, help="Option set JSON file")
    gamble_source = common.add_mutually_exclusive_group()
    gamble_source.add_argument("--gamble", help="Gamble as inline JSON")
    gamble_source.add_argument("--gamble-file", type=Path, help="Gamble JSON file")
    common.add_argument(
        "--certify",
        help="Attach a certificate to the report",
        action=argparse.BooleanOptionalAction,
        default=None,
    )
    common.add_argument(
        "--json",
        dest="json_output",
        help="Print a single JSON object",
        action=argparse.BooleanOptionalAction,
        default=None,
    )
    common.add_argument(
        "--mixing",
        help="Use the mixing closure (entail, choose)",
        action="store_true",
    )
    common.add_argument("--cap", type=int, help="Override engine.selection_cap")
    common.add_argument("--threads", type=int, help="Override engine.threads")

    parser = argparse.ArgumentParser(
        prog="desire-kernel",
        description="Exact inference for sets of desirable option sets.",
    )
    verbs = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        sub = verbs.add_parser(verb, parents=[common])
        if verb == "operators":
            sub.add_argument("--op", choices=OPERATORS, required=True)
        if verb == "verify-cert":
            sub.add_argument("--cert", type=Path, required=True)
    return parser


def _read_payload(inline: str | None, path: Path | None, flag: str) -> Any:
    if inline is not None:
        return load_json(inline, f"--{flag}")
    if path is not None:
        return load_json(path.read_text(), f"--{flag}-file")
    return None


def _bound_text(bound: Bound) -> str:
    return str(bound) if bound is UNBOUNDED else format_rational(bound)


@dataclass(frozen=True)
class Command:
    verb: str
    model_path: Path
    set_payload: Any = None
    gamble_payload: Any = None
    op: str | None = None
    cert_path: Path | None = None
    mixing: bool = False
    certify: bool | None = None
    json_output: bool | None = None
    cap: int | None = None
    threads: int | None = None

    @staticmethod
    def from_args(args: argparse.Namespace) -> "Command":
        return Command(
            verb=args.verb,
            model_path=args.model,
            set_payload=_read_payload(args.set, args.set_file, "set"),
            gamble_payload=_read_payload(args.gamble, args.gamble_file, "gamble"),
            op=getattr(args, "op", None),
            cert_path=getattr(args, "cert", None),
            mixing=args.mixing or args.verb == "entail-mixing",
            certify=args.certify,
            json_output=args.json_output,
            cap=args.cap,
            threads=args.threads,
        )

    def overrides(self) -> dict[str, Any]:
        engine: dict[str, Any] = {}
        if self.cap is not None:
            engine["selection_cap"] = self.cap
        if self.threads is not None:
            engine["threads"] = self.threads
        return {"engine": engine} if engine else {}


class CommandRunner:
    def __init__(self, injector: Injector, command: Command) -> None:
        self.command = command
        self.settings = injector.get(Settings)
        self.cone = injector.get(ConeComponent)
        self.choice = injector.get(ChoiceService)
        self.operators = injector.get(OperatorsService)
        self.verifier = injector.get(CertificateVerifier)
        self.certify = (
            command.certify
            if command.certify is not None
            else self.settings.cli.certify
        )
        self.json_output = (
            command.json_output
            if command.json_output is not None
            else self.settings.cli.json_output
        )
        self.payload: dict[str, Any] = {}
        self.model: Model = parse_model(
            command.model_path.read_text(),
            BackgroundOrdering(self.settings.model.default_ordering),
        )

    def run(self) -> Report:
        handlers: dict[str, Callable[[], Report]] = {
            "check": self._check,
            "entail": self._entail,
            "entail-mixing": self._entail,
            "choose": self._choose,
            "e-admit": self._e_admit,
            "lowprev": self._lowprev,
            "margin": self._margin,
            "total": self._total,
            "operators": self._operators,
            "verify-cert": self._verify_cert,
        }
        return handlers[self.command.verb]()

    # payloads

    def _assessment(self) -> OptionSetAssessment:
        if isinstance(self.model, OptionSetAssessment):
            return self.model
        if isinstance(self.model, GambleAssessment):
            return self.model.lift()
        raise ModelError(
            "$", f"'{self.command.verb}' needs an 'assessment' or 'desirable' model"
        )

    def _credal(self) -> CredalSet:
        if not isinstance(self.model, CredalSet):
            raise ModelError("$", f"'{self.command.verb}' needs a 'credal' model")
        return self.model

    def _query_set(self) -> OptionSet:
        if self.command.set_payload is None:
            raise ModelError("--set", "an option set is required")
        options = parse_option_set(
            self.command.set_payload, self.model.space, "--set"
        )
        self.payload["set"] = set_value(options)
        return options

    def _query_gamble(self) -> Gamble:
        if self.command.gamble_payload is None:
            raise ModelError("--gamble", "a gamble is required")
        u = parse_gamble(self.command.gamble_payload, self.model.space, "--gamble")
        self.payload["gamble"] = gamble_value(u)
        return u

    def _report(self, verdict: str, exit_code: int, **fields: Any) -> Report:
        self.payload["mixing"] = self.command.mixing
        if self.command.op is not None:
            self.payload["op"] = self.command.op
        return Report(
            verdict=verdict,
            exit_code=exit_code,
            input_hash=input_hash(self.command.verb, self.model, self.payload),
            **fields,
        )

    def _verdict_report(
        self, verdict: Verdict, assessment: OptionSetAssessment, yes: str, no: str
    ) -> Report:
        certificate = (
            CertificateDocument.from_certificate(
                verdict.certificate, assessment
            ).to_json_dict()
            if self.certify
            else None
        )
        return self._report(
            yes if verdict.answer else no,
            0 if verdict.answer else 1,
            certificate=certificate,
            timing=Timing(selections=verdict.selections),
        )

    def _membership(self, member: bool) -> Report:
        return self._report("member" if member else "not-member", 0 if member else 1)

    # verbs

    def _check(self) -> Report:
        if isinstance(self.model, CredalSet):
            return self._report("consistent", 0)
        assessment = self._assessment()
        verdict = self.choice.k_consistent(assessment)
        return self._verdict_report(verdict, assessment, "consistent", "inconsistent")

    def _entail(self) -> Report:
        options = self._query_set()
        if isinstance(self.model, CredalSet):
            accepted = self.cone.credal_accepts(self.model, options)
            return self._report(
                "entailed" if accepted else "not-entailed", 0 if accepted else 1
            )
        assessment = self._assessment()
        if self.command.mixing:
            verdict = self.choice.k_entails_mixing(assessment, options)
        else:
            verdict = self.choice.k_entails(assessment, options)
        return self._verdict_report(verdict, assessment, "entailed", "not-entailed")

    def _choose(self) -> Report:
        options = self._query_set()
        if isinstance(self.model, CredalSet):
            rejected = self.choice.credal_reject_set(self.model, options)
            chosen = OptionSet(
                options.space, tuple(u for u in options if u not in rejected)
            )
            selections = 0
        else:
            assessment = self._assessment()
            chosen = self.choice.choice_set(assessment, options, self.command.mixing)
            selections = count_selections(assessment)
        return self._report(
            "chosen",
            0,
            value=set_value(chosen),
            detail=str(chosen),
            timing=Timing(selections=selections),
        )

    def _e_admit(self) -> Report:
        options = self._query_set()
        chosen = self.choice.e_admissible_choice(self._credal(), options)
        return self._report("chosen", 0, value=set_value(chosen), detail=str(chosen))

    def _lowprev(self) -> Report:
        f = self._query_gamble()
        if isinstance(self.model, CredalSet):
            value = format_rational(self.model.lower_expectation(f))
            return self._report(value, 0)
        if not isinstance(self.model, GambleAssessment):
            raise ModelError("$", "'lowprev' needs a 'desirable' or 'credal' model")
        bound = self.cone.lower_prevision(self.model, f)
        return self._report(_bound_text(bound), 0)

    def _margin(self) -> Report:
        assessment = self._assessment()
        options = self._query_set()
        margin = self.choice.arch_margin(assessment, options)
        return self._report(
            _bound_text(margin.value),
            0 if margin.archimedean else 1,
            value={"attained": margin.attained},
            detail="(attained)" if margin.attained else "(supremum)",
            timing=Timing(selections=margin.selections),
        )

    def _total(self) -> Report:
        assessment = self._assessment()
        u = self._query_gamble()
        verdict = self.choice.totality_query(assessment, u)
        return self._verdict_report(verdict, assessment, "entailed", "not-entailed")

    def _operators(self) -> Report:
        op = self.command.op
        if op == "translate":
            options, u = self._query_set(), self._query_gamble()
            translated = self.operators.translate(options, u)
            return self._report(
                "set", 0, value=set_value(translated), detail=str(translated)
            )
        if op == "chull":
            options = self._query_set()
            member = self.operators.chull_contains(options, self._query_gamble())
            return self._membership(member)
        family = FiniteFamily.from_assessment(self._assessment())
        if op == "rn":
            produced = self.operators.rn_transform(family)
            return self._report(
                "family",
                0,
                value=[set_value(option_set) for option_set in produced],
                detail=" ".join(str(option_set) for option_set in produced),
            )
        options = self._query_set()
        contains = {
            "su": self.operators.su_contains,
            "rs": self.operators.rs_contains,
            "rp": self.operators.rp_contains,
        }[str(op)]
        member = contains(family, options)
        return self._membership(member)

    def _verify_cert(self) -> Report:
        assert self.command.cert_path is not None
        assessment = self._assessment()
        try:
            document = CertificateDocument.model_validate_json(
                self.command.cert_path.read_text()
            )
        except ValidationError as e:
            raise ModelError("--cert", str(e.errors()[0]["msg"])) from e
        query = self._query_set() if self.command.set_payload is not None else None
        valid = self.verifier.verify(assessment, query, document)
        return self._report("valid" if valid else "invalid", 0 if valid else 1)


def run(
    argv: Sequence[str] | None = None,
    stdout: TextIO | None = None,
    stderr: TextIO | None = None,
) -> int:
    """Run one command and return its exit code."""
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    started = time.monotonic()
    try:
        command = Command.from_args(args)
        injector = create_application_injector(command.overrides())
        runner = CommandRunner(injector, command)
        report = runner.run()
    except (SelectionCapExceededError, FamilyCapExceededError) as e:
        err.write(f"error: {e}\n")
        return 3
    except (ValueError, OSError) as e:
        err.write(f"error: {e}\n")
        return 2

    out.write(report.render(runner.json_output))
    logger.info(
        "Command verb=%s verdict=%s finished in %s",
        command.verb,
        report.verdict,
        human_time(time.monotonic() - started),
    )
    return report.exit_code
