from langgraph.graph import StateGraph, END
from workflow.phases import PHASE_ORDER, PHASES, PhaseContext
from workflow.state import ReproductionState
from models import CheckResult, CheckStatus, Provenance, ReproductionReport
from datetime import datetime
from typing import Iterable, Optional
import logging
import time

logger = logging.getLogger(__name__)

MARKERS = {
    CheckStatus.PASSED: "✅",
    CheckStatus.FAILED: "❌",
    CheckStatus.ERRORED: "💥",
    CheckStatus.SKIPPED: "⏭️",
}

class ReproductionWorkflow:
    def __init__(self, context: PhaseContext, only: Optional[Iterable[str]] = None,
                 budget_seconds: float = 900.0):
        selected = list(only or PHASE_ORDER)
        unknown = sorted(set(selected) - set(PHASE_ORDER))
        if unknown:
            raise ValueError(f"unknown phases {unknown}; choose from {PHASE_ORDER}")
        self.context = context
        self.selected = set(selected)
        self.budget_seconds = budget_seconds
        self.graph = self._build_graph()

    def _build_graph(self):
        workflow = StateGraph(ReproductionState)

        for phase in PHASE_ORDER:
            workflow.add_node(phase, self._phase_node(phase))
        workflow.add_node("summarize", self._summarize_node)

        workflow.set_entry_point(PHASE_ORDER[0])
        for current, following in zip(PHASE_ORDER, PHASE_ORDER[1:] + ["summarize"]):
            workflow.add_edge(current, following)
        workflow.add_edge("summarize", END)

        return workflow.compile()

    def _phase_node(self, phase: str):
        def node(state: ReproductionState) -> ReproductionState:
            if phase not in self.selected:
                logger.info(f"{MARKERS[CheckStatus.SKIPPED]} Skipping phase {phase}")
                state['checks'].append(CheckResult(
                    name=phase, expected="-", provenance=Provenance.DERIVED,
                    computed="-", status=CheckStatus.SKIPPED,
                ).model_dump(mode="json"))
                return state
            start = time.perf_counter()
            try:
                logger.info(f"🚀 Running phase {phase}")
                results = PHASES[phase](self.context)
            except Exception as e:
                logger.error(f"❌ Phase {phase} failed: {e}")
                state['errors'].append(f"{phase}: {e}")
                results = [CheckResult(
                    name=phase, expected="completion", provenance=Provenance.DERIVED,
                    computed=type(e).__name__, status=CheckStatus.ERRORED, detail=str(e),
                )]
            elapsed = time.perf_counter() - start
            over_budget = elapsed > self.budget_seconds
            for result in results:
                result.wall_time = elapsed / len(results)
                if over_budget and result.status is CheckStatus.PASSED:
                    result.status = CheckStatus.FAILED
                    result.detail = f"phase took {elapsed:.1f}s, budget {self.budget_seconds:.0f}s"
                logger.info(f"{MARKERS[result.status]} {result.name}: expected {result.expected}, got {result.computed}")
                state['checks'].append(result.model_dump(mode="json"))
            return state
        return node

    def _summarize_node(self, state: ReproductionState) -> ReproductionState:
        bad = [c for c in state['checks'] if c['status'] in (CheckStatus.FAILED.value, CheckStatus.ERRORED.value)]
        state['status'] = 'partial' if bad else 'completed'
        state['end_time'] = datetime.utcnow()
        marker = "⚠️" if bad else "✅"
        logger.info(f"{marker} Reproduction {state['status']}: {len(state['checks']) - len(bad)} ok, {len(bad)} failed")
        return state

    def run(self, state: ReproductionState) -> ReproductionState:
        try:
            return self.graph.invoke(state, {"recursion_limit": len(PHASE_ORDER) + 5})
        except Exception as e:
            logger.error(f"❌ Workflow failed: {e}")
            state['errors'].append(f"Workflow: {e}")
            state['status'] = 'failed'
            return state

    def report(self, state: ReproductionState) -> ReproductionReport:
        checks = [CheckResult.model_validate(c) for c in state['checks']]
        return ReproductionReport(
            seed=self.context.seed,
            workers=self.context.workers,
            passed=state['status'] == 'completed',
            checks=checks,
            errors=state['errors'],
        )


def initial_state(config: dict) -> ReproductionState:
    return ReproductionState(
        config=config,
        checks=[],
        errors=[],
        status='pending',
        start_time=datetime.utcnow(),
        end_time=None,
    )
