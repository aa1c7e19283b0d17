"""
Verification pipeline as a LangGraph state machine.
Validates the run configuration, runs the selected suites and writes report.json plus CSV tables.
"""

import logging
from pathlib import Path
from typing import List, Optional, TypedDict

from langgraph.graph import StateGraph, END

from config.settings import settings
from models.report import CheckRecord, ExperimentConfig, Report
from suites import SUITE_RUNNERS
from suites.common import SuiteContext

logger = logging.getLogger(__name__)


class VerificationState(TypedDict):
    """State object for the verification graph."""
    config: ExperimentConfig
    context: Optional[SuiteContext]
    checks: List[CheckRecord]
    report: Optional[Report]
    error: Optional[str]


class VerificationPipeline:
    """
    LangGraph-based runner for the verification suites.

    Suites record their checks on a shared SuiteContext; a numerical failure inside
    one check is a failed record, while a configuration problem stops the run.
    """

    def __init__(self):
        self.graph = self._build_graph()
        logger.info(f"VerificationPipeline initialized [suites={len(SUITE_RUNNERS)}]")

    def _build_graph(self) -> StateGraph:
        """Build the state machine validate_config -> run_suites -> write_outputs."""
        graph = StateGraph(VerificationState)

        graph.add_node("validate_config", self._validate_config_node)
        graph.add_node("run_suites", self._run_suites_node)
        graph.add_node("write_outputs", self._write_outputs_node)

        graph.set_entry_point("validate_config")
        graph.add_conditional_edges(
            "validate_config",
            self._should_run,
            {
                "run": "run_suites",
                "error": END
            }
        )
        graph.add_conditional_edges(
            "run_suites",
            self._should_write,
            {
                "write": "write_outputs",
                "error": END
            }
        )
        graph.add_edge("write_outputs", END)

        return graph.compile()

    def run(self, config: ExperimentConfig) -> Report:
        """
        Run the configured suites.

        Args:
            config: Validated experiment configuration

        Returns:
            Report with one record per check; error_message is set when the run
            could not start or its outputs could not be written
        """
        logger.info(f"Starting verification [suite={config.suite}] [seed={config.seed}]")

        initial_state = VerificationState(config=config, context=None, checks=[], report=None, error=None)
        final_state = self.graph.invoke(initial_state)

        report = final_state.get("report") or Report.create(config, final_state.get("checks", []))
        if final_state.get("error"):
            report.error_message = final_state["error"]
            logger.error(f"Verification stopped [suite={config.suite}] [error={final_state['error']}]")
        else:
            logger.info(f"Verification completed [suite={config.suite}] [{report.summary_line()}]")
        return report

    def _validate_config_node(self, state: VerificationState) -> VerificationState:
        """Check settings and that every selected suite has a runner."""
        problems = settings.validate_configuration()
        unknown = [name for name in state["config"].selected_suites() if name not in SUITE_RUNNERS]
        if unknown:
            problems.append(f"Unknown suites: {', '.join(unknown)}")
        if problems:
            state["error"] = f"Invalid configuration: {'; '.join(problems)}"
            logger.error(f"Configuration rejected [problems={len(problems)}]")
        return state

    def _run_suites_node(self, state: VerificationState) -> VerificationState:
        """Run each selected suite on a shared context."""
        config = state["config"]
        context = SuiteContext(config)
        for name in config.selected_suites():
            logger.info(f"Suite started [suite={name}]")
            try:
                SUITE_RUNNERS[name](context)
            except Exception as e:
                # A crash outside record() loses the rest of the suite, not the run
                logger.error(f"Suite aborted [suite={name}] [error={str(e)}]")
                context.checks.append(CheckRecord.create_error_record(name, f"{name}_suite", f"{type(e).__name__}: {e}"))
            passed = sum(1 for c in context.checks if c.suite == name and c.passed)
            total = sum(1 for c in context.checks if c.suite == name)
            logger.info(f"Suite finished [suite={name}] [passed={passed}/{total}]")
        state["context"] = context
        state["checks"] = context.checks
        return state

    def _write_outputs_node(self, state: VerificationState) -> VerificationState:
        """Write report.json and the tables into the output directory."""
        config = state["config"]
        report = Report.create(config, state["checks"])
        output_dir = Path(config.output_dir)
        try:
            output_dir.mkdir(parents=True, exist_ok=True)
            (output_dir / "report.json").write_text(report.model_dump_json(indent=2))
            written = state["context"].write_tables(output_dir)
            logger.info(f"Outputs written [dir={output_dir}] [tables={len(written)}]")
        except OSError as e:
            state["error"] = f"Could not write outputs to {output_dir}: {e}"
        state["report"] = report
        return state

    def _should_run(self, state: VerificationState) -> str:
        return "error" if state.get("error") else "run"

    def _should_write(self, state: VerificationState) -> str:
        return "error" if state.get("error") else "write"
