"""End-to-end runs: render a scenario, track every object, score the result."""
from __future__ import annotations

from dataclasses import dataclass, field

from .sim.metrics import GRACE, OVERLAP_THRESHOLD, EvalReport, TrackRow, evaluate, iou
from .sim.render import render
from .sim.scenario import Scenario
from .tracker.species import TrackerConfig, init_species, restart, track_frame


@dataclass
class TrackingRun:
    rows: list
    diagnostics: list                    # per frame: list of FrameDiagnostics
    truth: list
    report: EvalReport | None = None
    restarts: list = field(default_factory=list)   # (frame, object_id)

    def occlusion_log(self) -> list[str]:
        """One line per object per frame spent in a declared occlusion."""
        lines = []
        for t, diags in enumerate(self.diagnostics):
            seen = set()
            for d in diags:
                c = d.competition
                if c is None or (t, c.ids) in seen:
                    continue
                seen.add((t, c.ids))
                lines.append(
                    f"frame={t} pair={c.ids[0]},{c.ids[1]} overlap={d.overlap:.6f} "
                    f"log_power={c.log_power[0]:.6f},{c.log_power[1]:.6f} "
                    f"likelihood={c.likelihood[0]:.6f},{c.likelihood[1]:.6f} winner={c.winner}")
        return lines

    def winners(self) -> list[tuple[int, int]]:
        """(frame, winner id) for every competition."""
        out = []
        for t, diags in enumerate(self.diagnostics):
            for d in diags:
                if d.winner:
                    out.append((t, d.object_id))
        return out


def initial_boxes(gt) -> dict:
    return {k: gt.box(k) for k in sorted(gt.centers)}


def run_scenario(scenario: Scenario, config: TrackerConfig | None = None, restarts: bool = True,
                 boxes: dict | None = None, threshold: float = OVERLAP_THRESHOLD,
                 grace: int = GRACE) -> TrackingRun:
    """Track all objects; frame 0 initializes the species.

    With ``restarts`` a species whose box falls below ``threshold`` IoU is
    re-centred on the truth once ``grace`` further frames have passed.
    """
    config = config or TrackerConfig()
    frame, gt = render(scenario, 0)
    truth = [gt]
    species = init_species(frame, boxes or initial_boxes(gt), config)
    rows = [TrackRow(0, s.object_id, s.center[0], s.center[1], 1.0, 0, 0) for s in species]
    diagnostics = [[]]
    pending: dict[int, int] = {}
    done = []
    for t in range(1, scenario.frames):
        frame, gt = render(scenario, t)
        truth.append(gt)
        species, diags = track_frame(species, frame, config)
        diagnostics.append(diags)
        for d in diags:
            rows.append(TrackRow(t, d.object_id, d.center[0], d.center[1], d.likelihood,
                                 int(d.occluded), int(d.winner)))
        if not restarts:
            continue
        for i, sp in enumerate(species):
            k = sp.object_id
            if k not in gt.centers:
                continue
            if k in pending:
                if t >= pending[k]:
                    species[i] = restart(sp, frame, gt.centers[k], config)
                    done.append((t, k))
                    del pending[k]
                continue
            w, h = sp.extent
            box = (sp.center[0] - w / 2, sp.center[1] - h / 2, w, h)
            if iou(box, gt.box(k)) < threshold:
                pending[k] = t + grace
    run = TrackingRun(rows, diagnostics, truth, restarts=done)
    if boxes is None:
        run.report = evaluate(rows, truth, threshold, grace)
    return run
