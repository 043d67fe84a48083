"""
On-disk outputs: CSV tables, the ``summary.json`` provenance document and
the rendered validation report.

Outputs are byte-stable: rows are written in a fixed order, floats with
``repr`` and JSON with sorted keys, and nothing time-dependent is recorded.
"""

import csv
import io
import json
import math
import os

import numpy as np
from jinja2 import Environment, FileSystemLoader

from spruce.exceptions import OutputError
from spruce.state import env


TRAJECTORIES = 'trajectories.csv'
STOPPING = 'stopping.csv'
SUMMARY = 'summary.json'
ALPHA_SWEEP = 'alpha_sweep.csv'
VALIDATION_CSV = 'validation.csv'
VALIDATION_TXT = 'validation.txt'

TEMPLATE_DIR = os.path.join(os.path.dirname(__file__), 'templates')


def _cell(value):
    if isinstance(value, np.generic):
        value = value.item()
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def render_csv(header, rows):
    """
    CSV text with ``\\n`` line endings.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _write(out_dir, name, text):
    path = os.path.join(out_dir, name)
    try:
        os.makedirs(out_dir, exist_ok=True)
        with open(path, 'w', newline='') as fd:
            fd.write(text)
    except OSError as e:
        raise OutputError("cannot write %s: %s" % (path, e.strerror or e), wrapped=e)
    return path


def trajectories_csv(summary):
    return render_csv(('rep', 'n', 'arm', 'log_evalue'), summary.trajectories)


def stopping_csv(summary):
    return render_csv(('rep', 'tau', 'censored'), summary.stopping)


def alpha_sweep_csv(rows):
    return render_csv(('alpha', 'mean_tau', 'ci_lo', 'ci_hi', 'ratio', 'censored_frac'), rows)


def validation_csv(reports):
    return render_csv(('check', 'status', 'measured', 'bound', 'mc_error', 'detail'), reports)


def summary_document(command, settings, results=None):
    """
    ``summary.json`` text: schema version, package version, command, the
    resolved config echo and command results.
    """
    document = {
        'schema_version': env.schema_version,
        'version': env.version,
        'command': command,
        'config': dict(settings),
        'seed': settings.get('master_seed'),
        'results': results or {},
    }
    return json.dumps(document, sort_keys=True, indent=2) + '\n'


def monte_carlo_results(summary):
    return {
        'rejections': summary.rejections,
        'rejection_rate': summary.rejection_rate,
        'rejection_ci': list(summary.rejection_ci),
        'growth_quantiles': {
            'quantiles': [0.1, 0.5, 0.9],
            'rows': [list(row) for row in summary.growth],
        },
        'stopping_histogram': [list(row) for row in summary.histogram],
        'mean_pulls': list(summary.mean_pulls),
    }


def write_simulation(out_dir, summary, settings):
    """
    ``trajectories.csv``, ``stopping.csv`` and ``summary.json`` for one
    Monte-Carlo run; returns the written paths.
    """
    return [
        _write(out_dir, TRAJECTORIES, trajectories_csv(summary)),
        _write(out_dir, STOPPING, stopping_csv(summary)),
        _write(out_dir, SUMMARY, summary_document('simulate', settings, monte_carlo_results(summary))),
    ]


def _report_json(report):
    """
    A check report as a JSON-safe dict; infinite values become ``None``.
    """
    return dict((key, None if isinstance(value, float) and math.isinf(value) else value)
                for key, value in report._asdict().items())


def write_alpha_sweep(out_dir, rows, report, settings):
    results = {'report': _report_json(report), 'alphas': [row.alpha for row in rows]}
    return [
        _write(out_dir, ALPHA_SWEEP, alpha_sweep_csv(rows)),
        _write(out_dir, SUMMARY, summary_document('sweep-alpha', settings, results)),
    ]


def render_validation(reports, suite):
    jenv = Environment(loader=FileSystemLoader(TEMPLATE_DIR), keep_trailing_newline=True)
    statuses = [r.status for r in reports]
    return jenv.get_template(VALIDATION_TXT).render(
        version=env.version,
        schema_version=env.schema_version,
        suite=suite,
        reports=reports,
        passed=statuses.count('PASS'),
        failed=statuses.count('FAIL'),
        skipped=statuses.count('SKIP'),
    )


def write_validation(out_dir, reports, suite, settings=None):
    """
    ``validation.csv`` and ``validation.txt``, plus ``summary.json`` echoing
    ``settings`` when given; returns the written paths.
    """
    paths = [
        _write(out_dir, VALIDATION_CSV, validation_csv(reports)),
        _write(out_dir, VALIDATION_TXT, render_validation(reports, suite)),
    ]
    if settings is not None:
        results = {'reports': [_report_json(r) for r in reports]}
        paths.append(_write(out_dir, SUMMARY, summary_document('validate', settings, results)))
    return paths
