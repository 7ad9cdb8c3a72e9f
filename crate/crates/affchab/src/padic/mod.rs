//! Capped-precision arithmetic in Q_p, the Iwasawa logarithm, Teichmüller
//! lifts and embeddings of number fields into Q_p.

mod digits;
mod embed;
mod log;
mod number;
mod poly;

pub use digits::parse_padic;
pub use embed::{hensel_embed, log_rational_power, newton_lift, FieldEmbedding, RationalPower};
pub use log::{ilog, iwasawa_log, log_principal_unit};
pub use number::{
    int_valuation, p_pow, padic_sum, rational_valuation, teichmuller_of_residue, Comparison, PadicNumber, INFINITE,
};
pub use poly::PadicPoly;
