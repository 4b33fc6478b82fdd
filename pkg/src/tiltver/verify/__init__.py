"""Verification harness: claim checks producing reports with exact witnesses."""

from .checker import check_certificate_json, check_report
from .claims import (
    verify_example_w,
    verify_gl_vanishing,
    verify_gr_instance,
    verify_rem_mn,
    verify_splitpres,
    verify_staysl2_bound,
    verify_thm_w,
)
from .diagram import verify_diagram_split
from .report import VerificationReport, canonical_json

__all__ = [
    "VerificationReport", "canonical_json", "check_certificate_json", "check_report",
    "verify_diagram_split", "verify_example_w", "verify_gl_vanishing", "verify_gr_instance",
    "verify_rem_mn", "verify_splitpres", "verify_staysl2_bound", "verify_thm_w",
]
