"""Figures for traces and kinematics reports (matplotlib, file output)."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.linewidth": 0.6,
    "lines.linewidth": 1.4,
    "svg.hashsalt": "collective",
    "svg.fonttype": "none",
}


def _save(fig, path, timestamp):
    metadata = None if timestamp else {"Date": None}
    fig.savefig(path, metadata=metadata)
    plt.close(fig)


def spacetime_diagram(trace, colours, path, timestamp=True):
    """1-D worldlines: x horizontal, absolute time upwards, one line colour
    per automaton colour. Turns are marked with dots."""
    if trace.env.n != 1:
        raise ValueError("spacetime diagrams are drawn for one spatial dimension only")
    names = {c.id: c.name for c in colours}
    palette = plt.get_cmap("tab10")
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.0, 4.5))
        labelled = set()
        for e in trace.elem_ids:
            col = trace.colour_of[e]
            ts = list(range(trace.horizon + 1))
            xs = [float(trace.position(e, t)[0]) for t in ts]
            label = names[col] if col not in labelled else None
            labelled.add(col)
            ax.plot(xs, ts, color=palette((col - 1) % 10), label=label)
            turns = [t + 1 for t, f in enumerate(trace.turn_flags(e)) if f]
            ax.plot([xs[t] for t in turns], turns, "o", ms=3, color=palette((col - 1) % 10))
        ax.set_xlabel("x (lattice)")
        ax.set_ylabel("t")
        ax.set_title("worldlines")
        ax.legend(frameon=False, loc="upper right")
        fig.tight_layout()
        _save(fig, path, timestamp)


def kinematics_figure(rows, body_name, path, timestamp=True):
    """Average coordinate of a body against time, with external-state
    changes marked."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 3.0))
        ts = [r.t for r in rows]
        n = len(rows[0].x) if rows else 0
        for k in range(n):
            ax.plot(ts, [float(r.x[k]) for r in rows], label="x_B[%d]" % (k + 1))
        changed = [r.t for r in rows if r.changed_external_state]
        if changed:
            ax.vlines(changed, 0, 1, transform=ax.get_xaxis_transform(), colors="0.7", lw=0.6,
                      label="state change")
        ax.set_xlabel("t")
        ax.set_ylabel("average coordinate")
        ax.set_title(body_name)
        ax.legend(frameon=False)
        fig.tight_layout()
        _save(fig, path, timestamp)
