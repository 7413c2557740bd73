"""Instantaneous frequency and amplitude of a tone and of a damped multichannel mode.

Run:  python3 demos/hilbert_traces.py
"""

import numpy as np

from oscmemd import ImfSet, analytic_trace, build_record, joint_mode_trace
from oscmemd.hilbert import interior_slice
from oscmemd.synth import ModeSpec, ScenarioSpec, generate


def main():
    t = np.arange(3000) / 10.0
    tr = analytic_trace(np.sin(2 * np.pi * 0.3 * t), 10.0)
    sl = interior_slice(t.size)
    print(f"0.3 Hz tone: median frequency {np.median(tr.inst_frequency[sl]):.4f} Hz, "
          f"amplitude {tr.amplitude[sl].min():.4f}..{tr.amplitude[sl].max():.4f}")

    mode = ModeSpec(0.2, ((1.0, 0.0), (0.7, 2.0), (0.5, 4.0)), damping_ratio=0.01)
    record, _ = generate(ScenarioSpec(modes=(mode,)))
    imf_set = ImfSet(record.data[None], np.zeros_like(record.data), record)
    jt = joint_mode_trace(0, imf_set)
    slope = np.polyfit(record.time[sl], np.log(jt.joint_amplitude[sl]), 1)[0]
    print(f"damped 0.2 Hz mode: joint frequency {np.median(jt.joint_frequency[sl]):.4f} Hz, "
          f"decay {-slope:.5f} 1/s (expected {2 * np.pi * 0.2 * 0.01:.5f})")


if __name__ == "__main__":
    main()
