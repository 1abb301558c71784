"""
Tests for the seeded verification campaigns.
"""

from types import SimpleNamespace
from unittest.mock import patch

from quadric_web_manager import QuadricWebManager
from verification_report import FAIL, PASS
from verification_runner import RunConfig, VerificationRunner


def small_correspondence(**overrides):
    settings = dict(seed="runner", trials=10, webs=2, octic_trials=2, branch_samples=4)
    settings.update(overrides)
    return RunConfig("correspondence", **settings)


class TestCorrespondenceCampaign:
    """Round-trip campaigns over sampled plane webs."""

    def test_rerun_is_identical(self):
        """Two runs of one configuration render the same timing-free report."""
        first = VerificationRunner(small_correspondence()).run()
        second = VerificationRunner(small_correspondence()).run()
        assert first.to_json_lines(include_timing=False) == second.to_json_lines(include_timing=False)
        assert len(first.web_hashes) == 2
        assert not first.failed

    def test_residual_points_on_plane_fail(self):
        """A member whose residual points fall on the plane is a failure, not a counter."""
        on_plane = SimpleNamespace(split=True, tags=(), discriminant=1,
                                   points=[(0, 0, 0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 0, 0, 1, 0)])
        config = small_correspondence(trials=3, webs=1, octic_trials=0, branch_samples=0)
        with patch("verification_runner.quadric_to_points", return_value=on_plane), \
                patch("verification_runner.point_to_quadric", return_value=SimpleNamespace(lam=None)):
            report = VerificationRunner(config).run()
        checks = {c.name: c for c in report.checks}
        assert checks["residual_points_on_plane"].status == FAIL
        assert checks["residual_points_on_plane"].computed == 6
        assert checks["split_trials_with_two_points"].status == PASS
        assert report.failed

    def test_default_number_of_webs(self):
        """Campaigns sample five webs unless told otherwise."""
        assert RunConfig("correspondence").webs == 5
        assert QuadricWebManager().build_run_config("correspondence").webs == 5
