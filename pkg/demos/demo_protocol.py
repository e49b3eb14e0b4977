"""Walk through the three-step purification protocol and print its ledger.

A single particle shared coherently between a memory mode and a system mode
carries no local information: each marginal is maximally mixed.  The
protocol first concentrates the particle onto the system mode with a tunnel
coupling, then lets a quasistatic contact with the reservoir absorb ln 2 of
heat while the system relaxes back to half filling, and finally swaps the
modes so the memory recovers its original marginal.  The net effect is a
pure system, a restored memory, and heat ln 2 *extracted from* the
reservoir: cooling paid for by the initial mode entanglement.
"""

import math

from fermicool import ProtocolConfig, run_purification

LN2 = math.log(2.0)


def show(ledger, title):
    print(f"\n{title}")
    print(f"  engine: {ledger.engine}")
    header = f"  {'step':<14}{'n_M':>8}{'n_S':>8}{'S_M':>8}{'S_S':>8}{'Q':>10}{'sigma':>10}"
    print(header)
    for s in ledger.steps:
        print(f"  {s.label:<14}{s.n_M:8.4f}{s.n_S:8.4f}{s.S_M:8.4f}"
              f"{s.S_S:8.4f}{s.heat:10.4f}{s.entropy_production:10.4f}")
    print(f"  total heat drawn from the reservoir: -Q = {ledger.total_minus_q:+.6f}"
          f"  (-ln 2 = {-LN2:+.6f})")
    print(f"  system purified: {ledger.purified}, memory restored: {ledger.memory_restored}")


def main():
    print("Reversible limit: the full ln 2 is extracted.")
    show(run_purification(ProtocolConfig()), "ideal quasistatic run")

    print("\nA separable input has nothing to give.  The same steps applied to")
    print("the maximally mixed diagonal state move no heat at all:")
    show(run_purification(ProtocolConfig(diagonal=(0.5, 0.5))),
         "maximally mixed diagonal input")

    print("\nAt finite sweep speed some of the gain is lost to dissipation:")
    show(run_purification(ProtocolConfig(engine="master-equation")),
         "finite-time run (rate equation, Gamma*tau = 10)")


if __name__ == "__main__":
    main()
