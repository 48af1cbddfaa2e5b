#!/usr/bin/env python
# -*- coding: utf8 -*-
import json
import math
import os
from pathlib import Path

import numpy as np
import pandas as pd

from libs.constants import DEFAULT_ENCODING, FLOAT_FORMAT, LOGLOG_DAT, REPORT_COLUMNS, REPORT_CSV, REPORT_JSON

ENCODE_METHOD = DEFAULT_ENCODING


def _clean(value):
    """JSON has no NaN; missing values become null."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


class ReportWriter:
    """Writes report.csv, report.json and loglog.dat of a convergence run."""

    def __init__(self, out_dir, timings=True):
        self.out_dir = out_dir
        self.timings = timings

    def frame(self, report):
        rows = []
        for row in report.rows:
            rows.append([row.k, row.dx, row.err, row.eoc, row.wall_ms if self.timings else float('nan')])
        return pd.DataFrame(rows, columns=list(REPORT_COLUMNS))

    def write_csv(self, report):
        path = os.path.join(self.out_dir, REPORT_CSV)
        self.frame(report).to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep='',
                                  encoding=ENCODE_METHOD, lineterminator='\n')
        return path

    def write_json(self, report):
        path = os.path.join(self.out_dir, REPORT_JSON)
        content = _clean(report.to_dict())
        if not self.timings:
            for row in content['rows']:
                row['wall_ms'] = None
        Path(path).write_text(json.dumps(content, indent=2, sort_keys=True), ENCODE_METHOD)
        return path

    def write_loglog(self, report):
        """ln dx and ln err of every row with a positive error."""
        path = os.path.join(self.out_dir, LOGLOG_DAT)
        points = [(math.log(r.dx), math.log(r.err)) for r in report.rows
                  if not r.failed and math.isfinite(r.err) and r.err > 0.0]
        np.savetxt(path, np.array(points, dtype=float).reshape(-1, 2), fmt=FLOAT_FORMAT,
                   header='ln_dx ln_err', encoding=ENCODE_METHOD)
        return path

    def save(self, report):
        return [self.write_csv(report), self.write_json(report), self.write_loglog(report)]
