//! The 47 Statistics journals of the JCR 2010 selection, with display names.

use crate::corpus::Journal;

const JOURNALS: &[(&str, &str)] = &[
    ("AmS", "American Statistician"),
    ("AoS", "Annals of Statistics"),
    ("AISM", "Annals of the Institute of Statistical Mathematics"),
    ("ANZS", "Australian and New Zealand Journal of Statistics"),
    ("Bern", "Bernoulli"),
    ("BioJ", "Biometrical Journal"),
    ("Bcs", "Biometrics"),
    ("Bka", "Biometrika"),
    ("Biost", "Biostatistics"),
    ("CJS", "Canadian Journal of Statistics"),
    ("CSSC", "Communications in Statistics - Simulation and Computation"),
    ("CSTM", "Communications in Statistics - Theory and Methods"),
    ("CmpSt", "Computational Statistics"),
    ("CSDA", "Computational Statistics and Data Analysis"),
    ("EES", "Environmental and Ecological Statistics"),
    ("Envr", "Environmetrics"),
    ("ISR", "International Statistical Review"),
    ("JABES", "Journal of Agricultural, Biological and Environmental Statistics"),
    ("JAS", "Journal of Applied Statistics"),
    ("JBS", "Journal of Biopharmaceutical Statistics"),
    ("JCGS", "Journal of Computational and Graphical Statistics"),
    ("JMA", "Journal of Multivariate Analysis"),
    ("JNS", "Journal of Nonparametric Statistics"),
    ("JSCS", "Journal of Statistical Computation and Simulation"),
    ("JSPI", "Journal of Statistical Planning and Inference"),
    ("JSS", "Journal of Statistical Software"),
    ("JASA", "Journal of the American Statistical Association"),
    ("JRSS-A", "Journal of the Royal Statistical Society Series A"),
    ("JRSS-B", "Journal of the Royal Statistical Society Series B"),
    ("JRSS-C", "Journal of the Royal Statistical Society Series C"),
    ("JTSA", "Journal of Time Series Analysis"),
    ("LDA", "Lifetime Data Analysis"),
    ("Mtka", "Metrika"),
    ("SJS", "Scandinavian Journal of Statistics"),
    ("StataJ", "Stata Journal"),
    ("StNee", "Statistica Neerlandica"),
    ("StSin", "Statistica Sinica"),
    ("SMMR", "Statistical Methods in Medical Research"),
    ("StMod", "Statistical Modelling"),
    ("StPap", "Statistical Papers"),
    ("StSci", "Statistical Science"),
    ("Stats", "Statistics"),
    ("StCmp", "Statistics and Computing"),
    ("SPL", "Statistics and Probability Letters"),
    ("StMed", "Statistics in Medicine"),
    ("Tech", "Technometrics"),
    ("Test", "Test"),
];

/// The journal list in catalog order, ids assigned by position.
pub fn statistics_journals() -> Vec<Journal> {
    JOURNALS
        .iter()
        .enumerate()
        .map(|(id, (abbrev, name))| Journal {
            id,
            abbrev: (*abbrev).to_string(),
            full_name: (*name).to_string(),
            aliases: Vec::new(),
        })
        .collect()
}
