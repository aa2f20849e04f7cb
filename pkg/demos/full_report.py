"""
A full verification report
==========================

Run every suite on the atom structure of K2 and print the report lines.
"""

from qeagraph import Strategy, build_standard, full_report
from qeagraph.verify import format_reports

reports, status = full_report(build_standard("complete", 2), 3, strat=Strategy("random", 200, 1))
print(format_reports(reports))
print("exit status", status)
