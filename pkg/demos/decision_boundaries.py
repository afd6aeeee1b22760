#!/usr/bin/env python3
"""Where should the selector switch windows?  Boundaries from ROC crossings.

For a band-limited jammer, each window's detector has the exponential
ROC law Pd = Pfa^(1/(1+SJNR)).  Two windows' ROC curves cross at the
jammer power where their output SJNRs are equal; below it the
lighter window wins (less SNR loss), above it the heavier window wins
(more suppression).  That crossing depends on neither the target SNR
nor the false-alarm rate, so the selector can precompute one boundary
per consecutive window pair and quantize a single jammer-power estimate
against them.

Run:  python demos/decision_boundaries.py
"""

import numpy as np

from winselect import analytic_pd, band_covariance, make_context, sjnr


def main():
    ctx = make_context()
    rect, ham, cheb = ctx.windows
    names = ctx.window_names

    print("pairwise switch boundaries (independent of SNR and Pfa):")
    for k, bound in enumerate(ctx.boundaries.bounds_linear[1:], start=1):
        print(f"  {names[k-1]:<13} -> {names[k]:<13} at JNR = "
              f"{10*np.log10(bound):6.3f} dB  ({bound:.3f} linear)")

    # Walk the rectangle/Hamming pair across JNR and watch Pd cross over.
    band = band_covariance(16, ham.stopband_bins)
    s = np.ones(16)
    snr = 1.0            # 0 dB target
    pfa = 1e-2
    print(f"\nanalytic Pd at Pfa={pfa:g}, SNR=0 dB, jammer uniform over the shared band:")
    print(f"{'JNR dB':>7} {'rect':>8} {'hamming':>8}  better")
    for jnr_db in np.arange(0.0, 18.1, 1.5):
        jnr = 10 ** (jnr_db / 10)
        pd_r = analytic_pd(pfa, sjnr(rect, s, band, snr, jnr))
        pd_h = analytic_pd(pfa, sjnr(ham, s, band, snr, jnr))
        tag = "rectangle" if pd_r > pd_h else "hamming"
        print(f"{jnr_db:7.1f} {pd_r:8.4f} {pd_h:8.4f}  {tag}")

    b1 = ctx.boundaries.bounds_linear[1]
    pd_eq_r = analytic_pd(pfa, sjnr(rect, s, band, snr, b1))
    pd_eq_h = analytic_pd(pfa, sjnr(ham, s, band, snr, b1))
    print(f"\nat the boundary ({10*np.log10(b1):.3f} dB) the two laws agree: "
          f"{pd_eq_r:.6f} vs {pd_eq_h:.6f}")

    # Same boundary at a different Pfa: the crossing JNR does not move.
    for other_pfa in (1e-1, 1e-3):
        pd_r = analytic_pd(other_pfa, sjnr(rect, s, band, snr, b1))
        pd_h = analytic_pd(other_pfa, sjnr(ham, s, band, snr, b1))
        print(f"  Pfa={other_pfa:g}: {pd_r:.6f} vs {pd_h:.6f} (still equal)")


if __name__ == "__main__":
    main()
