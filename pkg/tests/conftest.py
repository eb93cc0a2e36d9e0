import numpy as np

from nbfountain.fountain import StreamSpec, emit_bits, triples_at
from nbfountain.gf import get_field
from nbfountain.precode import CodeParams, construct, encode
from nbfountain.spdecoder import CollectedOutputs


def build_instance(m, d_c, k_bits, seed, eps, p_erase=0.0, noise_sigma=None):
    """Code + codeword + collected outputs for one synthetic transmission."""
    field = get_field(m)
    params = CodeParams(m=m, d_c=d_c, k_bits=k_bits, seed=seed)
    code = construct(params)
    rng = np.random.default_rng(seed + 1)
    info = rng.integers(0, field.q, params.K).tolist()
    codeword = np.array(encode(code, info))
    n = round((1 + eps) * k_bits / (1 - p_erase if noise_sigma is None else 1.0))
    spec = StreamSpec(seed=seed + 2, n_symbols=params.N, m=m)
    v, w, h = triples_at(spec, np.arange(1, n + 1))
    bits = emit_bits(field, codeword, v, w, h).astype(float)
    if noise_sigma is not None:
        y = (1.0 - 2.0 * bits) + noise_sigma * rng.standard_normal(n)
        t = 2.0 * y / noise_sigma**2
        q0 = np.where(t >= 0, 1.0 / (1.0 + np.exp(-np.abs(t))),
                      np.exp(-np.abs(t)) / (1.0 + np.exp(-np.abs(t))))
        q1 = 1.0 - q0
    elif p_erase > 0:
        erased = rng.random(n) < p_erase
        q1 = np.where(erased, 0.5, bits)
        q0 = 1.0 - q1
    else:
        q1 = bits
        q0 = 1.0 - bits
    outputs = CollectedOutputs(v - 1, w, h, q0, q1)
    return code, field, codeword, outputs
