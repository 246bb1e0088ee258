"""OAM Transcoder - Deterministic simulator of an OAM / time-bin photonic space-time transcoder."""

__author__ = """Dan Ashton"""
__email__ = "dashton956@gmail.com"
__version__ = "1.0.1"


class TranscoderConfig:
    """Package configuration for the OAM transcoder simulator."""

    name = "oam_transcoder"
    verbose_name = "OAM Time-Bin Transcoder"
    description = "Deterministic simulator of a photonic space-time transcoder between OAM and time-bin encodings"
    version = __version__
    author = __author__
    author_email = __email__
    default_profile = "lab-2016"
    default_settings = {
        # Run Settings
        'scenario': 'forward',
        'seed': 2016,
        'output_dir': 'results',
        'speed_of_light': 'rounded',  # 'rounded' (3e8 m/s) or 'codata'

        # Cavity Settings
        'cavity': {
            'R': 0.95,
            'd_mm': 10.0,
            'n': 1.0,
            'Rc1_mm': 50.0,
            'Rc2_mm': 50.0,
            'lock_offset_hz': 0.0,
            'peak_transmission': 0.90,
            'off_resonance_reflection': 1.0,
            'transverse_leak': 1.0,  # 0 = ideal mode filter
            'scatter_charge': 1,
            'lock': {
                'gain_p': 0.2,
                'gain_i': 0.5,
                'noise_rms_nm': 0.03,
                'step_nm': 1.0,
                'dt_us': 10.0,
                'steps': 10000,
                'settle_steps': 2000,
            },
        },

        # Loop Settings (one round trip: EOM 0.90^2, VPP 0.90, nineteen 0.99 passes)
        'loop': {
            'T_ns': 11.0,
            't0_ns': 0.0,
            'max_loops': 12,
            'reentry_coupling': 0.8053,
            'gate_window_ns': 8.0,
            'vpp_impurity': 0.02,
            'coupler_extinction': 0.005,
            'components': {
                'qwp': {'kind': 'qwp', 'transmission': 0.99, 'passes': 2},
                'pbs2_out': {'kind': 'pbs', 'transmission': 0.99, 'port': 'reflect'},
                'mirrors_a': {'kind': 'mirror', 'transmission': 0.99, 'passes': 6},
                'vpp': {'kind': 'vpp', 'transmission': 0.90, 'charge_step': 1},
                'four_f': {'kind': 'four_f', 'transmission': 0.99, 'passes': 2},
                'mirrors_b': {'kind': 'mirror', 'transmission': 0.99, 'passes': 6},
                'pbs1': {'kind': 'pbs', 'transmission': 0.99, 'port': 'reflect'},
                'eom': {'kind': 'eom', 'transmission': 0.90, 'passes': 2},
                'pbs2_in': {'kind': 'pbs', 'transmission': 0.99, 'port': 'transmit'},
                'hwp': {'kind': 'hwp', 'transmission': 0.99},
            },
            'forward_order': ['qwp', 'pbs2_out', 'mirrors_a', 'vpp', 'four_f', 'mirrors_b', 'pbs1', 'eom', 'pbs2_in'],
            'reverse_order': ['pbs2_in', 'eom', 'hwp', 'pbs1', 'mirrors_a', 'vpp', 'four_f', 'mirrors_b', 'pbs2_out',
                              'qwp'],
            'slm': {'pattern_charge': 0, 'diffraction_efficiency': 1.0},
            'coupler': {'transmission': 1.0},
        },

        # Mach-Zehnder Settings
        'mz': {
            'arm_delay_m': 3.3,
            'splitting': 0.5,
            'relative_phase_rad': 0.0,
            'arm_loss': 1.0,
            'coherence': 1.0,
        },

        # Laguerre-Gaussian Settings (w0 = cavity eigenmode waist)
        'lg': {
            'w0_um': 61.6,  # null = cavity eigenmode waist
            'wavelength_nm': 795.0,
            'n_r': 256,
            'n_alpha': 512,
            'extent_w': 4.0,
            'l_values': [0, 1, 2, 3, 4, 5],
        },

        # Analysis Settings
        'analysis': {
            'pulse_fwhm_ns': 5.0,
            'pulse_shape': 'gaussian',
            'bandwidth_mhz': 500.0,
            'sample_ns': 0.1,
            'floor_db': -60.0,
            'sweep_points': 64,
            'jitter_rms': 0.0,
            'repetition_hz': 1000.0,
            'slm_frame_hz': 60.0,
            'detection_threshold_db': -20.0,
        },

        # Input Settings
        'inputs': {
            'l_values': [0, 1, 2, 3],
            'state_file': None,
        },

        # Sweep Settings
        'sweep': {
            'parameter': 'loop.reentry_coupling',
            'start': 0.5,
            'stop': 1.0,
            'points': 11,
        },
    }


config = TranscoderConfig
