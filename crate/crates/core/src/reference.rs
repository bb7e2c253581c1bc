//! Tabulated values used by the verification suites.
//!
//! Rows store 𝒫₃ in semantic (σ, ρ) order. Exact values are factored strings.

use crate::factored::parse_factored;
use crate::qseries::FormId;
use rug::Rational;

/// One row of the L*-tables.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub form: FormId,
    pub m: u64,
    pub n: u32,
    pub lstar: &'static str,
    pub p3_rho: &'static str,
    pub p3_sigma: &'static str,
    pub conductor: &'static str,
    pub res_sigma: &'static str,
    pub res_rho: &'static str,
}

/// One row of the B-tables, columns in the order of [`crate::padic::b_columns`].
#[derive(Clone, Debug)]
pub struct BRow {
    pub form: FormId,
    pub m: u64,
    pub cols: &'static [&'static str],
}

/// L*(f,σ,n).
#[derive(Clone, Debug)]
pub struct HeaderValue {
    pub form: FormId,
    pub n: u32,
    pub value: &'static str,
}

pub const HEADERS: &[HeaderValue] = &[
    HeaderValue { form: FormId::F5w4, n: 1, value: "-100" },
    HeaderValue { form: FormId::F5w4, n: 2, value: "13/3" },
    HeaderValue { form: FormId::F7w4, n: 1, value: "49" },
    HeaderValue { form: FormId::F7w4, n: 2, value: "0" },
    HeaderValue { form: FormId::F5w6, n: 1, value: "-400" },
    HeaderValue { form: FormId::F5w6, n: 2, value: "62/15" },
    HeaderValue { form: FormId::F5w6, n: 3, value: "-31/1125" },
    HeaderValue { form: FormId::F121w4, n: 1, value: "176" },
    HeaderValue { form: FormId::F121w4, n: 2, value: "0" },
];

/// σ root numbers by level.
pub const SIGMA_ROOT_NUMBERS: &[(FormId, i32)] =
    &[(FormId::F5w4, 1), (FormId::F7w4, -1), (FormId::F5w6, 1), (FormId::F121w4, -1)];

pub const TABLE_ROWS: &[TableRow] = &[
    TableRow { form: FormId::F5w4, m: 2, n: 1, lstar: "-2^5*5^3*7*13", p3_rho: "1", p3_sigma: "2*5^2/3", conductor: "2^4*3^6*5^2", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w4, m: 3, n: 1, lstar: "-2^4*5^4*13*41", p3_rho: "1", p3_sigma: "2*5/3", conductor: "3^10*5^2", res_sigma: "2+O(3)", res_rho: "2+O(3)" },
    TableRow { form: FormId::F5w4, m: 5, n: 1, lstar: "2^5*3*5^2*13*17", p3_rho: "1", p3_sigma: "0", conductor: "3^6*5^4", res_sigma: "0", res_rho: "2*3^1+O(3^2)" },
    TableRow { form: FormId::F5w4, m: 6, n: 1, lstar: "-2^5*5^3*13*1801", p3_rho: "1", p3_sigma: "2*5^2/3", conductor: "2^4*3^10*5^2", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w4, m: 7, n: 1, lstar: "-2^8*5^3*13*23*41/7", p3_rho: "1", p3_sigma: "2^3*5^5/3*7^2", conductor: "3^6*5^2*7^4", res_sigma: "2+O(3)", res_rho: "2+O(3)" },
    TableRow { form: FormId::F5w4, m: 10, n: 1, lstar: "2^3*3*5^3*13", p3_rho: "2*5/3", p3_sigma: "0", conductor: "2^4*3^2*5^4", res_sigma: "0", res_rho: "1*3^1+O(3^2)" },
    TableRow { form: FormId::F5w4, m: 11, n: 1, lstar: "-2^10*5^3*13*2311/11", p3_rho: "1", p3_sigma: "2^5*5^3*41/3*11^2", conductor: "3^6*5^2*11^4", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w4, m: 12, n: 1, lstar: "-2^6*5^3*13*839", p3_rho: "1", p3_sigma: "2*5^2/3", conductor: "2^4*3^10*5^2", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w4, m: 2, n: 2, lstar: "2*5^2*13/3^3", p3_rho: "1", p3_sigma: "5^2/2*3^2", conductor: "2^4*3^6*5^2", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w4, m: 3, n: 2, lstar: "2^2*5^2*13/3^5", p3_rho: "1", p3_sigma: "2*5/3^2", conductor: "3^10*5^2", res_sigma: "2+O(3)", res_rho: "2+O(3)" },
    TableRow { form: FormId::F5w4, m: 5, n: 2, lstar: "0", p3_rho: "0", p3_sigma: "2^4/3*5", conductor: "3^6*5^4", res_sigma: "1*3^1+O(3^2)", res_rho: "0" },
    TableRow { form: FormId::F5w4, m: 6, n: 2, lstar: "2*5^2*7^2*13/3^5", p3_rho: "1", p3_sigma: "5^2/2*3^2", conductor: "2^4*3^10*5^2", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w4, m: 7, n: 2, lstar: "2^6*5^2*13/3^3*7^3", p3_rho: "1", p3_sigma: "2^3*5^5/3^2*7^4", conductor: "3^6*5^2*7^4", res_sigma: "2+O(3)", res_rho: "2+O(3)" },
    TableRow { form: FormId::F5w4, m: 10, n: 2, lstar: "0", p3_rho: "0", p3_sigma: "2^2/3", conductor: "2^4*3^2*5^4", res_sigma: "2*3^1+O(3^2)", res_rho: "0" },
    TableRow { form: FormId::F5w4, m: 11, n: 2, lstar: "2^6*5^2*13/3^3*11", p3_rho: "1", p3_sigma: "2^5*5^3*41/3^2*11^4", conductor: "3^6*5^2*11^4", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w4, m: 12, n: 2, lstar: "2^5*5^2*13/3^5", p3_rho: "1", p3_sigma: "5^2/2*3^2", conductor: "2^4*3^10*5^2", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F7w4, m: 2, n: 1, lstar: "2^3*3*5*7^4", p3_rho: "1", p3_sigma: "5*7^2/2*3", conductor: "2^4*3^6*7^2", res_sigma: "1*3^1+O(3^2)", res_rho: "1*3^1+O(3^2)" },
    TableRow { form: FormId::F7w4, m: 3, n: 1, lstar: "2^2*3*5*7^3*13^2", p3_rho: "1", p3_sigma: "2*7/3", conductor: "3^10*7^2", res_sigma: "2*3^1+O(3^2)", res_rho: "2*3^1+O(3^2)" },
    TableRow { form: FormId::F7w4, m: 5, n: 1, lstar: "2^7*3*7^3*71", p3_rho: "1", p3_sigma: "2^3*7^2*23/3*5^2", conductor: "3^6*5^4*7^2", res_sigma: "1*3^1+O(3^2)", res_rho: "1*3^1+O(3^2)" },
    TableRow { form: FormId::F7w4, m: 6, n: 1, lstar: "2^4*3*5*7^4*113", p3_rho: "1", p3_sigma: "5*7^2/2*3", conductor: "2^4*3^10*7^2", res_sigma: "1*3^1+O(3^2)", res_rho: "1*3^1+O(3^2)" },
    TableRow { form: FormId::F7w4, m: 7, n: 1, lstar: "2^2*3*5*7^2*223", p3_rho: "1", p3_sigma: "2^3*7/3", conductor: "3^6*7^4", res_sigma: "2*3^1+O(3^2)", res_rho: "2*3^1+O(3^2)" },
    TableRow { form: FormId::F7w4, m: 10, n: 1, lstar: "2^3*7^3*239", p3_rho: "2*7/3", p3_sigma: "2*7^3*23/3*5", conductor: "2^4*3^2*5^4*7^2", res_sigma: "2*3^1+O(3^2)", res_rho: "2*3^1+O(3^2)" },
    TableRow { form: FormId::F7w4, m: 11, n: 1, lstar: "2^2*3*5*7^3*211*499/11", p3_rho: "1", p3_sigma: "2^5*5*7^2*31/3*11^2", conductor: "3^6*7^2*11^4", res_sigma: "1*3^1+O(3^2)", res_rho: "1*3^1+O(3^2)" },
    TableRow { form: FormId::F7w4, m: 12, n: 1, lstar: "2^3*3*5*7^4*241", p3_rho: "1", p3_sigma: "5*7^2/2*3", conductor: "2^4*3^10*7^2", res_sigma: "1*3^1+O(3^2)", res_rho: "1*3^1+O(3^2)" },
    TableRow { form: FormId::F5w6, m: 2, n: 1, lstar: "-2^12*5^2*31*661", p3_rho: "1", p3_sigma: "2^7*5*11/3", conductor: "2^4*3^6*5^2", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w6, m: 3, n: 1, lstar: "-2^10*5^3*13*31*2953", p3_rho: "1", p3_sigma: "2^3*11/3", conductor: "3^10*5^2", res_sigma: "2+O(3)", res_rho: "2+O(3)" },
    TableRow { form: FormId::F5w6, m: 5, n: 1, lstar: "2^8*3*5*31*193*211", p3_rho: "1", p3_sigma: "-2^6*11", conductor: "3^6*5^4", res_sigma: "2*3^1+O(3^2)", res_rho: "1*3^1+O(3^2)" },
    TableRow { form: FormId::F5w6, m: 6, n: 1, lstar: "-2^11*5^3*31*137*39323", p3_rho: "1", p3_sigma: "2^7*5*11/3", conductor: "2^4*3^10*5^2", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w6, m: 7, n: 1, lstar: "-2^12*5^2*31*14230919", p3_rho: "1", p3_sigma: "2^9*11*277^2/3*7^2", conductor: "3^6*5^2*7^4", res_sigma: "2+O(3)", res_rho: "2+O(3)" },
    TableRow { form: FormId::F5w6, m: 10, n: 1, lstar: "2^7*3*5*31*1097", p3_rho: "2^3*11/3", p3_sigma: "-2^10*5*11", conductor: "2^4*3^2*5^4", res_sigma: "1*3^1+O(3^2)", res_rho: "2*3^1+O(3^2)" },
    TableRow { form: FormId::F5w6, m: 11, n: 1, lstar: "-2^13*5^3*31*971*592759/11", p3_rho: "1", p3_sigma: "2^10*5^2*7^2*37^2/3*11", conductor: "3^6*5^2*11^4", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w6, m: 12, n: 1, lstar: "-2^11*5^2*7^2*31*533063", p3_rho: "1", p3_sigma: "2^7*5*11/3", conductor: "2^4*3^10*5^2", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w6, m: 2, n: 2, lstar: "2^3*31*1759/3^3", p3_rho: "1", p3_sigma: "2*5^2*7/3^2", conductor: "2^4*3^6*5^2", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w6, m: 3, n: 2, lstar: "2^8*5*31*1223/3^5", p3_rho: "1", p3_sigma: "2^3*5/3^2", conductor: "3^10*5^2", res_sigma: "2+O(3)", res_rho: "2+O(3)" },
    TableRow { form: FormId::F5w6, m: 5, n: 2, lstar: "-2^6*13*31*37/3^2*5", p3_rho: "1", p3_sigma: "0", conductor: "3^6*5^4", res_sigma: "0", res_rho: "2*3^1+O(3^2)" },
    TableRow { form: FormId::F5w6, m: 6, n: 2, lstar: "2^3*19*31*47*5531/3^5", p3_rho: "1", p3_sigma: "2*5^2*7/3^2", conductor: "2^4*3^10*5^2", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w6, m: 7, n: 2, lstar: "2^8*31*47*53813/3^3*7^3", p3_rho: "1", p3_sigma: "2^9*5^5/3^2*7^4", conductor: "3^6*5^2*7^4", res_sigma: "2+O(3)", res_rho: "2+O(3)" },
    TableRow { form: FormId::F5w6, m: 10, n: 2, lstar: "-2^3*31^2/5", p3_rho: "2^3*5/3^2", p3_sigma: "0", conductor: "2^4*3^2*5^4", res_sigma: "0", res_rho: "1*3^1+O(3^2)" },
    TableRow { form: FormId::F5w6, m: 11, n: 2, lstar: "2^9*31*28000571/3^3*11^3", p3_rho: "1", p3_sigma: "2^12*5^3*163/3^2*11^4", conductor: "3^6*5^2*11^4", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w6, m: 12, n: 2, lstar: "2^5*7*31*145543/3^5", p3_rho: "1", p3_sigma: "2*5^2*7/3^2", conductor: "2^4*3^10*5^2", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w6, m: 2, n: 3, lstar: "-2*31/3^6*5", p3_rho: "1", p3_sigma: "5^2*7/2*3^3", conductor: "2^4*3^6*5^2", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w6, m: 3, n: 3, lstar: "-2^8*31/3^10*5", p3_rho: "1", p3_sigma: "2^3*5/3^3", conductor: "3^10*5^2", res_sigma: "2+O(3)", res_rho: "2+O(3)" },
    TableRow { form: FormId::F5w6, m: 5, n: 3, lstar: "0", p3_rho: "0", p3_sigma: "2^6/3^2*5", conductor: "3^6*5^4", res_sigma: "1*3^1+O(3^2)", res_rho: "0" },
    TableRow { form: FormId::F5w6, m: 6, n: 3, lstar: "-2*31*59^2/3^10*5", p3_rho: "1", p3_sigma: "5^2*7/2*3^3", conductor: "2^4*3^10*5^2", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w6, m: 7, n: 3, lstar: "-2^6*31*47^2/3^6*5*7^5", p3_rho: "1", p3_sigma: "2^9*5^5/3^3*7^6", conductor: "3^6*5^2*7^4", res_sigma: "2+O(3)", res_rho: "2+O(3)" },
    TableRow { form: FormId::F5w6, m: 10, n: 3, lstar: "0", p3_rho: "0", p3_sigma: "2^2*7/3^2", conductor: "2^4*3^2*5^4", res_sigma: "2*3^1+O(3^2)", res_rho: "0" },
    TableRow { form: FormId::F5w6, m: 11, n: 3, lstar: "-2^6*31*181^2/3^6*5*11^5", p3_rho: "1", p3_sigma: "2^12*5^3*163/3^3*11^6", conductor: "3^6*5^2*11^4", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F5w6, m: 12, n: 3, lstar: "-2^7*31/3^10*5", p3_rho: "1", p3_sigma: "5^2*7/2*3^3", conductor: "2^4*3^10*5^2", res_sigma: "1+O(3)", res_rho: "1+O(3)" },
    TableRow { form: FormId::F121w4, m: 2, n: 1, lstar: "2^5*3*11*17*37", p3_rho: "1", p3_sigma: "2^2*3", conductor: "2^4*3^6*11^4", res_sigma: "2*3^2+O(3^3)", res_rho: "1*3^1+O(3^2)" },
    TableRow { form: FormId::F121w4, m: 3, n: 1, lstar: "2^5*5*11*4373", p3_rho: "1", p3_sigma: "2^2/3", conductor: "3^10*11^4", res_sigma: "2+O(3)", res_rho: "2+O(3)" },
    TableRow { form: FormId::F121w4, m: 5, n: 1, lstar: "2^5*3^3*11*2069", p3_rho: "1", p3_sigma: "2^8*3/5^2", conductor: "3^6*5^4*11^4", res_sigma: "2*3^2+O(3^3)", res_rho: "1*3^3+O(3^4)" },
    TableRow { form: FormId::F121w4, m: 6, n: 1, lstar: "2^3*3^2*11*83*2297", p3_rho: "1", p3_sigma: "2^2*3", conductor: "2^4*3^10*11^4", res_sigma: "2*3^2+O(3^3)", res_rho: "2*3^2+O(3^3)" },
    TableRow { form: FormId::F121w4, m: 7, n: 1, lstar: "2^5*5*11*349*863/7", p3_rho: "1", p3_sigma: "2^8/3", conductor: "3^6*7^4*11^4", res_sigma: "2+O(3)", res_rho: "2+O(3)" },
    TableRow { form: FormId::F121w4, m: 10, n: 1, lstar: "2^3*3^2*11*13*211", p3_rho: "2^2/3", p3_sigma: "2^8*3^3/5^2", conductor: "2^4*3^2*5^4*11^4", res_sigma: "2*3^4+O(3^5)", res_rho: "1*3^2+O(3^3)" },
    TableRow { form: FormId::F121w4, m: 11, n: 1, lstar: "2^8*11^2", p3_rho: "1", p3_sigma: "2^2/3", conductor: "3^6*11^4", res_sigma: "2+O(3)", res_rho: "2+O(3)" },
    TableRow { form: FormId::F121w4, m: 12, n: 1, lstar: "2^5*3*11*13*31*367", p3_rho: "1", p3_sigma: "2^2*3", conductor: "2^4*3^10*11^4", res_sigma: "2*3^2+O(3^3)", res_rho: "2*3^1+O(3^2)" },
];

pub const B_ROWS: &[BRow] = &[
    BRow { form: FormId::F5w4, m: 2, cols: &["2^2*7", "2"] },
    BRow { form: FormId::F5w4, m: 3, cols: &["5*41", "1"] },
    BRow { form: FormId::F5w4, m: 6, cols: &["2^2*1801", "2*7"] },
    BRow { form: FormId::F5w4, m: 7, cols: &["2^4*23*41", "2^2"] },
    BRow { form: FormId::F5w4, m: 11, cols: &["2^6*2311", "2^2*11"] },
    BRow { form: FormId::F5w4, m: 12, cols: &["2^3*839", "2^3"] },
    BRow { form: FormId::F7w4, m: 2, cols: &["2^2*3*7"] },
    BRow { form: FormId::F7w4, m: 3, cols: &["3*13^2"] },
    BRow { form: FormId::F7w4, m: 5, cols: &["2^5*3*71"] },
    BRow { form: FormId::F7w4, m: 6, cols: &["2^3*3*7*113"] },
    BRow { form: FormId::F7w4, m: 7, cols: &["3*223"] },
    BRow { form: FormId::F7w4, m: 10, cols: &["2^2*239"] },
    BRow { form: FormId::F7w4, m: 11, cols: &["3*211*499"] },
    BRow { form: FormId::F7w4, m: 12, cols: &["2^2*3*7*241"] },
    BRow { form: FormId::F5w6, m: 2, cols: &["2^5*661", "1759", "1"] },
    BRow { form: FormId::F5w6, m: 3, cols: &["2^2*5*13*2953", "2^2*5*1223", "2"] },
    BRow { form: FormId::F5w6, m: 5, cols: &["3*193*211", "3*5^2*13*37", "0"] },
    BRow { form: FormId::F5w6, m: 6, cols: &["2^4*5*137*39323", "19*47*5531", "59"] },
    BRow { form: FormId::F5w6, m: 7, cols: &["2^4*7*14230919", "2^2*47*53813", "47"] },
    BRow { form: FormId::F5w6, m: 10, cols: &["3*1097", "3*5^2*31", "0"] },
    BRow { form: FormId::F5w6, m: 11, cols: &["2^5*5*971*592759", "2^3*28000571", "181"] },
    BRow { form: FormId::F5w6, m: 12, cols: &["2^4*7^2*533063", "2^2*7*145543", "2^3"] },
    BRow { form: FormId::F121w4, m: 2, cols: &["2^2*3*17*37"] },
    BRow { form: FormId::F121w4, m: 3, cols: &["2*5*4373"] },
    BRow { form: FormId::F121w4, m: 5, cols: &["2*3^3*5*2069"] },
    BRow { form: FormId::F121w4, m: 6, cols: &["3^2*83*2297"] },
    BRow { form: FormId::F121w4, m: 7, cols: &["2*5*349*863"] },
    BRow { form: FormId::F121w4, m: 10, cols: &["3^2*5*13*211"] },
    BRow { form: FormId::F121w4, m: 11, cols: &["2^4*11^2"] },
    BRow { form: FormId::F121w4, m: 12, cols: &["2^2*3*13*31*367"] },
];

impl TableRow {
    pub fn lstar_value(&self) -> Rational {
        parse_factored(self.lstar).expect("table value")
    }
}

pub fn header(form: &FormId, n: u32) -> Option<Rational> {
    HEADERS.iter().find(|h| h.form == *form && h.n == n).map(|h| parse_factored(h.value).expect("header"))
}

pub fn rows_for(form: &FormId, m: u64) -> Vec<&'static TableRow> {
    TABLE_ROWS.iter().filter(|r| r.form == *form && r.m == m).collect()
}

pub fn b_row(form: &FormId, m: u64) -> Option<&'static BRow> {
    B_ROWS.iter().find(|r| r.form == *form && r.m == m)
}

/// m-values of the desk-scale acceptance rows.
pub fn desk_scale_m(form: &FormId) -> &'static [u64] {
    match form {
        FormId::F5w4 | FormId::F7w4 => &[2, 3, 5, 6, 7, 10, 11, 12],
        FormId::F5w6 | FormId::F121w4 => &[2, 3, 5, 6, 7],
        _ => &[],
    }
}

/// m-values of the B-table acceptance rows.
pub fn b_table_m(form: &FormId) -> &'static [u64] {
    match form {
        FormId::F5w4 => &[2, 3, 6, 7, 11, 12],
        FormId::F7w4 | FormId::F5w6 => &[2, 3, 5, 6, 7],
        FormId::F121w4 => &[2, 3, 5, 7],
        _ => &[],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_entries_parse() {
        for r in TABLE_ROWS {
            for s in [r.lstar, r.p3_rho, r.p3_sigma, r.conductor] {
                parse_factored(s).unwrap();
            }
        }
        for b in B_ROWS {
            for s in b.cols {
                parse_factored(s).unwrap();
            }
        }
        assert_eq!(TABLE_ROWS.len(), 56);
        assert_eq!(header(&FormId::F5w6, 3), Some(Rational::from((-31, 1125))));
    }
}
