"""
Quadric web manager using YAML configuration.
Samples, saves and inspects webs of quadrics, and runs the verification campaigns
from the command line.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

from census import CASES, SLOW_CASES
from exact_field import FieldCtx
from verification_report import Report
from verification_runner import COMMANDS, RunConfig, VerificationRunner
from web_geometry import (DegenerateWebError, PreconditionError, Plane, Web, det_octic,
                          sample_web)

DEFAULT_CONFIG = Path(__file__).parent / "quadric_webs.yaml"
BUDGET_ENV = "QUADRIC_WEBS_BUDGET"


class QuadricWebManager:
    """
    Owns the YAML configuration and turns it, plus command-line overrides,
    into run configurations and sampled webs.
    """

    def __init__(self, config_path: Union[str, Path, None] = None):
        """Initialize the manager with a YAML configuration."""
        self.config_path = Path(config_path) if config_path else DEFAULT_CONFIG
        self.config = self._load_config()
        if not isinstance(self.config, dict) or "quadric_webs" not in self.config:
            raise ValueError(f"Configuration has no 'quadric_webs' section: {self.config_path}")
        self.settings = self.config["quadric_webs"]

        log_settings = self.settings.get("logging", {})
        logging.basicConfig(level=getattr(logging, str(log_settings.get("level", "INFO")).upper(), logging.INFO),
                            format=log_settings.get("format", "%(asctime)s - %(levelname)s - %(message)s"))
        self.logger = logging.getLogger(__name__)

    def _load_config(self) -> Dict[str, Any]:
        """Load YAML configuration file."""
        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                return yaml.safe_load(f)
        except FileNotFoundError:
            raise FileNotFoundError(f"Configuration file not found: {self.config_path}")
        except yaml.YAMLError as e:
            raise ValueError(f"Invalid YAML configuration: {e}")

    def _section(self, name: str) -> Dict[str, Any]:
        return self.settings.get(name) or {}

    @property
    def default_prime(self) -> int:
        return int(self._section("field").get("default_prime", 65537))

    def env_budget(self) -> Optional[int]:
        """Pair budget from the environment, if set."""
        raw = os.environ.get(BUDGET_ENV)
        if raw is None or raw.strip() == "":
            return None
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"{BUDGET_ENV} must be an integer, got {raw!r}")

    def groebner_budget(self, case: Optional[str] = None, budget: Optional[int] = None) -> Dict[str, Optional[int]]:
        """
        Effective Groebner budget.

        Args:
            case: Census case; slow cases start from the `slow` block
            budget: Pair budget from the command line, wins over everything

        Returns:
            Dict with `max_pairs` and `max_degree`
        """
        section = self._section("groebner")
        limits = dict(section.get("slow") or {}) if case in SLOW_CASES else {}
        max_pairs = limits.get("max_pairs", section.get("max_pairs"))
        max_degree = limits.get("max_degree", section.get("max_degree"))
        env = self.env_budget()
        if env is not None:
            max_pairs = env
        if budget is not None:
            max_pairs = budget
        return {"max_pairs": max_pairs, "max_degree": max_degree}

    def build_run_config(self, command: str, **overrides: Any) -> RunConfig:
        """
        Merge the YAML sections with command-line overrides into a RunConfig.

        Overrides whose value is None are ignored.
        """
        if command not in COMMANDS:
            raise ValueError(f"Unknown command: {command}")
        overrides = {k: v for k, v in overrides.items() if v is not None}
        correspondence = self._section("correspondence")
        nodes = self._section("nodes")
        sampling = self._section("sampling")
        case = overrides.pop("case", "nodes10")
        budget = self.groebner_budget(case if command == "census" else None, overrides.pop("budget", None))

        values: Dict[str, Any] = {
            "command": command,
            "prime": self.default_prime,
            "seed": 0,
            "trials": correspondence.get("trials", 100),
            "webs": correspondence.get("webs", 5),
            "octic_trials": correspondence.get("octic_trials", 20),
            "branch_samples": correspondence.get("branch_samples", 500),
            "rejection_band": tuple(correspondence.get("rejection_band", (0.35, 0.65))),
            "band_min_trials": correspondence.get("band_min_trials", 100),
            "mode": nodes.get("mode", "eliminate"),
            "brute_prime_limit": nodes.get("brute_prime_limit", 1000),
            "retry_budget": sampling.get("retry_budget", 16),
            "octic_line_budget": sampling.get("octic_line_budget", 64),
            "budget": budget["max_pairs"],
            "max_degree": budget["max_degree"],
            "case": case,
            "expected": dict(self._section("expected_invariants")),
        }
        values["expected"].setdefault("nodes_on_plane", nodes.get("expected_nodes", 10))
        values.update(overrides)
        return RunConfig(**values)

    def sample_web(self, prime: Optional[int] = None, seed: Any = 0, with_plane: bool = True,
                   rationals: bool = False) -> Web:
        """Sample a web over F_p (or the rationals), containing the default plane unless told otherwise."""
        ctx = FieldCtx.rationals() if rationals else FieldCtx.prime_field(prime or self.default_prime)
        bound = int(self._section("field").get("rational_entry_bound", 5)) if rationals else 10
        retries = int(self._section("sampling").get("retry_budget", 16))
        web = sample_web(ctx, seed, Plane.default(ctx) if with_plane else None, retries, bound)
        self.logger.info(f"Sampled web {web.content_hash()[:12]} ({ctx})")
        return web

    def save_web(self, web: Web, file_path: Union[str, Path]) -> bool:
        """
        Save a web to a JSON file.

        Args:
            web: Web to save
            file_path: Output file path

        Returns:
            True if successful, False otherwise
        """
        try:
            file_path = Path(file_path)
            with open(file_path, "w", encoding="utf-8") as f:
                json.dump(web.to_dict(), f, indent=2, sort_keys=True)
            self.logger.info(f"Web saved to: {file_path}")
            return True
        except (OSError, TypeError) as e:
            self.logger.error(f"Error saving web: {e}")
            return False

    def load_web(self, file_path: Union[str, Path]) -> Optional[Web]:
        """
        Load a web from a JSON file.

        Returns:
            The web, or None if the file is missing or malformed
        """
        try:
            with open(file_path, "r", encoding="utf-8") as f:
                data = json.load(f)
            web = Web.from_dict(data)
            self.logger.info(f"Web loaded from: {file_path}")
            return web
        except FileNotFoundError:
            self.logger.error(f"Web file not found: {file_path}")
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            self.logger.error(f"Error loading web: {e}")
        return None

    def describe_web(self, web: Web) -> Dict[str, Any]:
        octic = det_octic(web)
        return {
            "content_hash": web.content_hash(),
            "field": web.ctx,
            "plane": web.plane.to_json() if web.plane else None,
            "octic_degree": octic.det_poly.total_degree,
            "octic_terms": len(octic.det_poly.terms),
            "seed": web.seed,
        }

    def run(self, config: RunConfig, web: Optional[Web] = None) -> Report:
        self.logger.info(f"Running {config.command} (p={config.prime}, seed={config.seed})")
        return VerificationRunner(config, web).run()


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML configuration file (default: quadric_webs.yaml)")
    common.add_argument("--prime", type=int, help="Prime field characteristic")
    common.add_argument("--seed", help="Seed for every random choice")
    common.add_argument("-o", "--out", help="Write the JSON-lines report (or the web) to this file")
    common.add_argument("-v", "--verbose", action="store_true", help="Enable verbose logging")

    parser = argparse.ArgumentParser(description="Verify the geometry of webs of quadrics containing a plane")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("invariants", parents=[common], help="Check the closed-form ledger")

    corr = sub.add_parser("correspondence", parents=[common], help="Round trips between quadrics and points")
    corr.add_argument("--trials", type=int, help="Random members per web")
    corr.add_argument("--webs", type=int, help="Number of webs to sample")
    corr.add_argument("--octic-trials", type=int, help="Members sampled on the octic per web")
    corr.add_argument("--branch-samples", type=int, help="Samples for the discriminant/determinant tally")
    corr.add_argument("--web", help="Use the web stored in this JSON file")

    nodes = sub.add_parser("nodes", parents=[common], help="Rational nodes of the base locus on the plane")
    nodes.add_argument("--groebner", action="store_true", help="Certify the node degree with a Groebner basis")
    nodes.add_argument("--mode", choices=["eliminate", "brute"], help="Node search strategy")
    nodes.add_argument("--budget", type=int, help="Groebner pair budget")
    nodes.add_argument("--web", help="Use the web stored in this JSON file")

    census = sub.add_parser("census", parents=[common], help="Groebner degree of a census ideal")
    census.add_argument("--case", choices=CASES, default="nodes10", help="Census ideal")
    census.add_argument("--budget", type=int, help="Groebner pair budget")

    web = sub.add_parser("web", parents=[common], help="Sample or inspect a web")
    web.add_argument("action", choices=["sample", "show"])
    web.add_argument("--in", dest="infile", help="Web JSON file to show")
    web.add_argument("--no-plane", action="store_true", help="Sample a web without a common plane")
    web.add_argument("--rationals", action="store_true", help="Sample over the rationals")
    return parser


def _web_command(manager: QuadricWebManager, args: argparse.Namespace) -> int:
    if args.action == "sample":
        web = manager.sample_web(args.prime, args.seed if args.seed is not None else 0,
                                 with_plane=not args.no_plane, rationals=args.rationals)
        if args.out:
            if not manager.save_web(web, args.out):
                return 1
            print(f"✓ Web saved to {args.out}")
    else:
        if not args.infile:
            print("Error: web show needs --in <file>")
            return 2
        web = manager.load_web(args.infile)
        if web is None:
            print(f"Error: could not load web from {args.infile}")
            return 1
    for key, value in manager.describe_web(web).items():
        print(f"  {key}: {value}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    args = _parser().parse_args(argv)

    try:
        manager = QuadricWebManager(args.config)
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        if args.command == "web":
            return _web_command(manager, args)

        web = None
        web_file = getattr(args, "web", None)
        if web_file:
            web = manager.load_web(web_file)
            if web is None:
                print(f"Error: could not load web from {web_file}")
                return 1
        config = manager.build_run_config(
            args.command,
            prime=web.ctx.modulus if web is not None and web.ctx.is_prime_field else args.prime,
            seed=args.seed,
            trials=getattr(args, "trials", None),
            webs=getattr(args, "webs", None),
            octic_trials=getattr(args, "octic_trials", None),
            branch_samples=getattr(args, "branch_samples", None),
            groebner=getattr(args, "groebner", None),
            mode=getattr(args, "mode", None),
            budget=getattr(args, "budget", None),
            case=getattr(args, "case", None),
            output=args.out,
            web_file=web_file,
        )
        report = manager.run(config, web)
    except (DegenerateWebError, PreconditionError, ValueError, FileNotFoundError) as e:
        print(f"Error: {e}")
        return 2

    print(report.summary_table())
    if args.out:
        if report.save(args.out):
            print(f"✓ Report written to {args.out}")
        else:
            return 1
    return 1 if report.failed else 0


if __name__ == "__main__":
    sys.exit(main())
