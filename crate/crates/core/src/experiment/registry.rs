//! Built-in scenarios, one per reproduced figure.

pub struct Entry {
    pub id: &'static str,
    pub figure: &'static str,
    /// What the pass/fail metrics measure.
    pub metric: &'static str,
    pub config: &'static str,
}

pub const SCENARIOS: &[Entry] = &[
    Entry {
        id: "vn-curves",
        figure: "von Neumann amplification curves",
        metric: "SE (max|λ|-1)/h² = 3 at kh = 0, π; LF (max|λ|-1)/h = 1.5 near kh = π/2",
        config: "[vn-curves]\nprotocol = vn-curves\nh = 0.01\nse_tol = 0.01\nlf_tol = 0.02\n",
    },
    Entry {
        id: "fig2",
        figure: "Fig. 2: SE error spectra, nonreflecting boundaries",
        metric: "between t = 100 and 200 the kh = π end grows while the middle decays",
        config: "[fig2]\nprotocol = spectra\nscheme = se\nL = 50\nh = 0.02\ntimes = 0, 100, 200\n\
                 expect = nonincreasing\nexpect_ends = increasing\n",
    },
    Entry {
        id: "fig3",
        figure: "Fig. 3: SE error staircase, nonreflecting boundaries",
        metric: "|λ|^{2M} from the staircase within a factor 2 of the closed form",
        config: "[fig3]\nprotocol = staircase\nscheme = se\nL = 25\nh = 0.00625\nratio_factor = 2\n",
    },
    Entry {
        id: "fig4",
        figure: "Fig. 4: SE |λ|^{2M} against h",
        metric: "log-log slope in [1.7, 2.4]; each case within a factor 2 of the closed form",
        config: "[fig4/ladder]\nprotocol = staircase\nscheme = se\nL = 25\nh = 0.01, 0.005, 0.0025, 0.00125, 0.000625\nslope_range = 1.7, 2.4\n\n\
                 [fig4/cases]\nprotocol = staircase\nscheme = se\nL = 50, 25, 25\nh = 0.02, 0.0125, 0.00625\nratio_factor = 2\n",
    },
    Entry {
        id: "fig7",
        figure: "Fig. 7: ME spectral dip",
        metric: "ln-growth of the narrow box over the wide box in [1.6, 2.2]",
        config: "[fig7]\nprotocol = dip\nscheme = me\nL = 25\nh = 0.05\ntimes = 25, 50, 75\nm_ave_fraction = 0.025, 0.1\nratio_range = 1.6, 2.2\n",
    },
    Entry {
        id: "fig8",
        figure: "Fig. 8: ME |λ|^{2M} against h",
        metric: "slopes 4 ± 0.5 (narrow box) and 2 ± 0.5 (wide box)",
        config: "[fig8]\nprotocol = me-slope\nscheme = me\nL = 25\nh = 0.01, 0.005, 0.0025, 0.001, 0.0005\n\
                 m_ave_fraction = 0.025, 0.1\nslope_target = 4, 2\nslope_tol = 0.5\nrealizations = 10\n",
    },
    Entry {
        id: "fig9",
        figure: "Fig. 9: LF det Φ₊ scan and growth rates",
        metric: "scan roots in [√2, 3/2]; measured growth exponents within 10% of the largest root",
        config: "[fig9/scan]\nprotocol = lf-scan\nL = 50\nh = 0.01\ngap_max = 0.02\n\n\
                 [fig9/growth]\nprotocol = lf-growth\nscheme = lf\nL = 50\nh = 0.01\nt_final = 14\nsample_every = 1\n\
                 alpha_tol = 0.1\nstartup_tol = 0.01\n",
    },
    Entry {
        id: "fig10a",
        figure: "Fig. 10a: SE at large L",
        metric: "mid-spectrum growth per period L in [4, 16]",
        config: "[fig10a]\nprotocol = growth\nscheme = se\nL = 200\nh = 0.02\nperiods = 2\ngrowth_range = 4, 16\n",
    },
    Entry {
        id: "fig10b",
        figure: "Fig. 10b: ME stability threshold in L",
        metric: "non-increasing at L = 300, strictly increasing at L = 600",
        config: "[fig10b/stable]\nprotocol = growth\nscheme = me\nL = 300\nh = 0.02\nperiods = 3\nexpect = nonincreasing\n\n\
                 [fig10b/unstable]\nprotocol = growth\nscheme = me\nL = 600\nh = 0.02\nperiods = 3\nexpect = increasing\n",
    },
    Entry {
        id: "fig12",
        figure: "Fig. 12: Gross-Neveu soliton, ME",
        metric: "periodic error peaks near kh = π/2; nonreflecting mid-spectrum error decays",
        config: "[fig12/periodic]\nprotocol = peak\nmodel = gross-neveu\nomega = 0.7\nscheme = me\nbc = periodic\n\
                 L = 64\nh = 0.015625\nnoise = 1e-12\nt_final = 1000\nwindowed = false\npeak_tol = 0.3\nmin_growth = 100\n\n\
                 [fig12/nonreflecting]\nprotocol = growth\nmodel = gross-neveu\nomega = 0.7\nscheme = me\n\
                 L = 64\nh = 0.015625\nnoise = 1e-12\ntimes = 1000, 5000\nwindowed = false\nexpect = nonincreasing\n",
    },
    Entry {
        id: "fig13",
        figure: "Fig. 13: Gross-Neveu soliton, ME, nonreflecting",
        metric: "dip deepens about twice as fast as the wings at L = 128; growth at L = 600",
        config: "[fig13/dip]\nprotocol = dip\nmodel = gross-neveu\nomega = 0.7\nscheme = me\nL = 128\nh = 0.03125\n\
                 noise = 1e-6\ntimes = 128, 256, 384\nm_ave = 5, 102\naway_kh = pi/4\nratio_range = 1.6, 2.2\n\n\
                 [fig13/growth]\nprotocol = growth\nmodel = gross-neveu\nomega = 0.7\nscheme = me\nL = 600\nh = 0.03125\n\
                 noise = 1e-12\nperiods = 3\nm_ave_fraction = 0.025\nexpect = increasing\n",
    },
];

pub fn find(id: &str) -> Option<&'static Entry> {
    SCENARIOS.iter().find(|e| e.id == id)
}

pub fn ids() -> Vec<&'static str> {
    SCENARIOS.iter().map(|e| e.id).collect()
}
