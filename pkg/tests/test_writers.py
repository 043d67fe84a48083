import json
import os

import numpy as np
from nose.tools import eq_, ok_, raises

from spruce import diagnostics, harness, writers
from spruce.context_managers import hide
from spruce.exceptions import OutputError
from spruce.state import env

from utils import assert_contains, bernoulli_config, read, tempdir


def test_cells():
    eq_(writers.render_csv(('a', 'b', 'c', 'd'), [(0.1, None, True, 3)]), "a,b,c,d\n0.1,,true,3\n")


def test_floats_keep_full_precision():
    eq_(writers.render_csv(('x',), [(1.0 / 3.0,)]), "x\n0.3333333333333333\n")


def test_numpy_scalars_render_like_builtins():
    row = (np.float64(20.25), np.int64(7), np.bool_(True))
    eq_(writers.render_csv(('x', 'n', 'ok'), [row]), "x,n,ok\n20.25,7,true\n")


@raises(OutputError)
def test_unwritable_output_directory():
    with tempdir() as out:
        taken = os.path.join(out, 'taken')
        with open(taken, 'w') as fd:
            fd.write('')
        writers.write_validation(taken, [], 'fast')


def test_summary_document_is_sorted_and_versioned():
    text = writers.summary_document('oracle', {'reps': 5, 'alpha': 0.05, 'master_seed': 3}, {'b': 1, 'a': 2})
    document = json.loads(text)
    eq_(document['schema_version'], env.schema_version)
    eq_(document['version'], env.version)
    eq_(document['seed'], 3)
    eq_(document['command'], 'oracle')
    ok_(text.index('"alpha"') < text.index('"reps"'))
    ok_(text.endswith('}\n'))


def _simulate(out_dir):
    config = bernoulli_config([0.7, 0.5], horizon=50, reps=3, record_every=25)
    with hide('progress'):
        summary = harness.monte_carlo(config, threads=1)
    return writers.write_simulation(out_dir, summary, {'master_seed': 0, 'reps': 3})


def test_simulation_outputs_are_byte_stable():
    with tempdir() as first, tempdir() as second:
        paths = _simulate(first)
        again = _simulate(second)
        eq_([os.path.basename(p) for p in paths], [writers.TRAJECTORIES, writers.STOPPING, writers.SUMMARY])
        for a, b in zip(paths, again):
            eq_(read(a), read(b))


def test_trajectory_rows():
    with tempdir() as out:
        trajectories = read(_simulate(out)[0]).splitlines()
    eq_(trajectories[0], "rep,n,arm,log_evalue")
    eq_(len(trajectories), 1 + 3 * 2)
    ok_(trajectories[1].startswith("0,25,"))


def test_alpha_sweep_without_final_bound_is_strict_json():
    rows = [diagnostics.SweepRow(0.1, 6.0, 6.0, 6.0, 1.8, 0.0)]
    report = diagnostics.make_report('stopping_ratio', True, 1.8, float('inf'))
    with tempdir() as out:
        paths = writers.write_alpha_sweep(out, rows, report, {'master_seed': 0})
        eq_(read(paths[0]), "alpha,mean_tau,ci_lo,ci_hi,ratio,censored_frac\n0.1,6.0,6.0,6.0,1.8,0.0\n")
        text = read(paths[1])
    ok_("Infinity" not in text)
    document = json.loads(text)
    eq_(document['results']['report']['bound'], None)


def test_validation_report_rendering():
    reports = [
        diagnostics.make_report('ordering', True, 0.0, 1e-6, detail='3 traces, 40 rounds'),
        diagnostics.make_report('mgf', False, 2.5, 2.0, 0.01),
        diagnostics.CheckReport('suboptimal_pulls', diagnostics.SKIP, 0.0, 0.0, 0.0, ''),
    ]
    text = writers.render_validation(reports, 'fast')
    assert_contains(r'^ordering\s+PASS\s+measured=0 bound=1e-06', text)
    assert_contains(r'^    3 traces, 40 rounds$', text)
    assert_contains(r'^mgf\s+FAIL', text)
    assert_contains(r'^1/3 passed, 1 failed, 1 skipped\.$', text)
    with tempdir() as out:
        paths = writers.write_validation(out, reports, 'fast')
        eq_(read(paths[1]), text)
        eq_(read(paths[0]).splitlines()[0], "check,status,measured,bound,mc_error,detail")


def test_validation_summary_echoes_settings():
    reports = [diagnostics.make_report('stopping_ratio', True, 1.3, float('inf'))]
    with tempdir() as out:
        paths = writers.write_validation(out, reports, 'fast', {'suite': 'fast', 'sizes': {'reps': 5}})
        eq_([os.path.basename(p) for p in paths], ['validation.csv', 'validation.txt', 'summary.json'])
        document = json.loads(read(paths[2]))
    eq_(document['command'], 'validate')
    eq_(document['config']['sizes'], {'reps': 5})
    eq_(document['results']['reports'][0]['bound'], None)
