//! The named checks behind `codense verify`, one record per check.
//!
//! Check names are dot-separated, module first, so `--only` prefixes
//! select natural slices of the suite.  Randomized checks derive their
//! generator from the run seed alone, never from thread scheduling.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use codense_core::codensity::{
    codensity_carrier, equivariant_maps, point_family, ultrafilter_comparison, zn_fields_codensity,
};
use codense_core::famset::{
    monad_laws_report, sample, ultraproduct, ultraproduct_routes_agree, v_on_morphism, v_on_object,
    FamMorphism, FamObject,
};
use codense_core::finset::{FiniteMap, FiniteSet};
use codense_core::integration::uniqueness_of_integration;
use codense_core::report::CheckRecord;
use codense_core::rig::{enumerate_integrals, theorem_rig_bijection, RigSpec};
use codense_core::ultrafilter::{
    borger_alpha, enumerate_ultrafilters, galvin_horn_exhaustive, multiplication_map, pushforward,
    satisfies_partition_condition, ultrafilter_carrier, unit, EndofunctorData, SubsetFamily,
    Ultrafilter,
};
use codense_core::vect::{
    dual_monad_report, linearity_for_free, vect_codensity_carrier, vect_comparison, PrimeField,
    VectorSpace,
};
use codense_core::{Caps, Error, Result};

/// Sizing knobs and seed for a suite run.
pub struct SuiteConfig {
    pub seed: u64,
    pub timings: bool,
    pub only: Option<String>,
    pub max_set: usize,
    pub max_subcat: usize,
    pub max_field_dim: usize,
    pub skeleton_cap: usize,
    pub caps: Caps,
}

type CheckFn = Box<dyn Fn(&SuiteConfig) -> Result<CheckRecord> + Send + Sync>;

pub fn run(config: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let checks = build_checks(config);
    let selected: Vec<_> = checks
        .into_iter()
        .filter(|(name, _)| {
            config
                .only
                .as_deref()
                .is_none_or(|prefix| name.starts_with(prefix))
        })
        .collect();
    if selected.is_empty() {
        return Err(Error::Parse(format!(
            "no check matches prefix {:?}",
            config.only.as_deref().unwrap_or("")
        )));
    }
    selected
        .par_iter()
        .map(|(_, check)| {
            let start = Instant::now();
            let record = check(config)?;
            Ok(if config.timings {
                record.with_millis(Some(start.elapsed().as_millis() as u64))
            } else {
                record
            })
        })
        .collect()
}

fn add(
    checks: &mut Vec<(String, CheckFn)>,
    name: String,
    f: impl Fn(&SuiteConfig) -> Result<CheckRecord> + Send + Sync + 'static,
) {
    checks.push((name, Box::new(f)));
}

fn build_checks(config: &SuiteConfig) -> Vec<(String, CheckFn)> {
    let mut checks = Vec::new();
    galvin_horn_checks(&mut checks, config);
    kennison_checks(&mut checks, config);
    sharpness_checks(&mut checks, config);
    lawvere_checks(&mut checks, config);
    rig_checks(&mut checks, config);
    integration_checks(&mut checks, config);
    monad_checks(&mut checks, config);
    zn_checks(&mut checks);
    vect_checks(&mut checks, config);
    famset_checks(&mut checks, config);
    checks
}

fn galvin_horn_checks(checks: &mut Vec<(String, CheckFn)>, config: &SuiteConfig) {
    for n in 0..=config.max_set.min(4) {
        let name = format!("galvin-horn.n{n}");
        let cname = name.clone();
        add(checks, name, move |_| {
            let report = galvin_horn_exhaustive(&FiniteSet::new(n))?;
            let expected = format!(
                "{} families, {n} principal ultrafilters, partitions agree",
                1u128 << (1u32 << n)
            );
            let partitions_agree = report.classifications_agree
                && report.partition_all_count == report.ultrafilter_count
                && report.partition_three_count == report.ultrafilter_count;
            let observed = format!(
                "{} families, {} {} ultrafilters, partitions {}",
                report.family_count,
                report.ultrafilter_count,
                if report.ultrafilters_principal {
                    "principal"
                } else {
                    "non-principal"
                },
                if partitions_agree {
                    "agree"
                } else {
                    "disagree"
                },
            );
            Ok(CheckRecord::compare(
                &cname,
                format!("size={n}"),
                expected,
                observed,
            ))
        });
    }
}

fn kennison_checks(checks: &mut Vec<(String, CheckFn)>, config: &SuiteConfig) {
    let shapes: [&[usize]; 4] = [&[3], &[1, 2, 3], &[1, 2, 3, 4], &[0, 1, 2, 3]];
    for shape in shapes {
        if shape.iter().max().copied().unwrap_or(0) > config.max_subcat {
            continue;
        }
        for x in 0..=config.max_set.min(4) {
            let sizes: Vec<usize> = shape.to_vec();
            let label = sizes
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join("-");
            let name = format!("codensity.kennison.{label}.x{x}");
            let cname = name.clone();
            add(checks, name, move |cfg| {
                let cmp = ultrafilter_comparison(&sizes, &FiniteSet::new(x), &cfg.caps)?;
                Ok(CheckRecord::compare(
                    &cname,
                    format!("subcat={sizes:?} x={x}"),
                    format!("{x} points, bijective"),
                    format!(
                        "{} points, {}",
                        cmp.codensity_size,
                        if cmp.bijective() {
                            "bijective"
                        } else {
                            "not bijective"
                        }
                    ),
                ))
            });
        }
    }
}

fn sharpness_checks(checks: &mut Vec<(String, CheckFn)>, config: &SuiteConfig) {
    for x in 0..=config.max_set.min(4) {
        let name = format!("codensity.sharpness.1.x{x}");
        let cname = name.clone();
        add(checks, name, move |cfg| {
            let carrier = codensity_carrier(&[1], &FiniteSet::new(x), true, &cfg.caps)?;
            Ok(CheckRecord::compare(
                &cname,
                format!("subcat=[1] x={x}"),
                "1",
                carrier.size().to_string(),
            ))
        });
    }
    if config.max_set >= 3 && config.max_subcat >= 2 {
        let name = "codensity.sharpness.1-2.x3".to_string();
        let cname = name.clone();
        add(checks, name, move |cfg| {
            let set = FiniteSet::new(3);
            let carrier = codensity_carrier(&[1, 2], &set, true, &cfg.caps)?;
            let mut from_points = Vec::with_capacity(carrier.size());
            for point in &carrier.points {
                let family = point_family(&carrier.elements, point)?;
                let mut masks: Vec<u64> = family.masks().collect();
                masks.sort_unstable();
                from_points.push(masks);
            }
            from_points.sort();
            let mut from_condition = Vec::new();
            for bits in 0u32..256 {
                let members = (0..8).filter(|i| bits >> i & 1 == 1).map(|i| i as u64);
                let family = SubsetFamily::from_masks(set.clone(), members)?;
                if satisfies_partition_condition(&family, 1, cfg.caps.enumeration)?
                    && satisfies_partition_condition(&family, 2, cfg.caps.enumeration)?
                {
                    let mut masks: Vec<u64> = family.masks().collect();
                    masks.sort_unstable();
                    from_condition.push(masks);
                }
            }
            from_condition.sort();
            Ok(CheckRecord::compare(
                &cname,
                "subcat=[1,2] x=3".to_string(),
                "8 families, matching",
                format!(
                    "{} families, {}",
                    from_points.len(),
                    if from_points == from_condition && from_condition.len() == 8 {
                        "matching"
                    } else {
                        "not matching"
                    }
                ),
            ))
        });
    }
}

fn lawvere_checks(checks: &mut Vec<(String, CheckFn)>, config: &SuiteConfig) {
    for x in 1..=config.max_set.min(2) {
        let name = format!("codensity.lawvere.b3.x{x}");
        let cname = name.clone();
        add(checks, name, move |cfg| {
            let maps = equivariant_maps(3, &FiniteSet::new(x), &cfg.caps)?;
            Ok(CheckRecord::compare(
                &cname,
                format!("b=3 x={x}"),
                format!("{x} maps"),
                format!("{} maps", maps.len()),
            ))
        });
    }
    if config.max_set >= 3 {
        let name = "codensity.lawvere.b2.x3".to_string();
        let cname = name.clone();
        add(checks, name, move |cfg| {
            let count = equivariant_maps(2, &FiniteSet::new(3), &cfg.caps)?.len();
            Ok(CheckRecord::compare(
                &cname,
                "b=2 x=3",
                "more than 3 maps",
                if count > 3 {
                    "more than 3 maps".to_string()
                } else {
                    format!("{count} maps")
                },
            ))
        });
    }
}

fn rig_checks(checks: &mut Vec<(String, CheckFn)>, config: &SuiteConfig) {
    for modulus in [3usize, 5, 6] {
        for x in 0..=config.max_set.min(3) {
            let name = format!("rig.z{modulus}.x{x}");
            let cname = name.clone();
            add(checks, name, move |cfg| {
                let rig = RigSpec::zmod(modulus)?;
                let report = theorem_rig_bijection(&FiniteSet::new(x), &rig, cfg.caps.enumeration)?;
                Ok(CheckRecord::compare(
                    &cname,
                    format!("rig=z{modulus} x={x}"),
                    format!("{x} integrals, bijective"),
                    format!(
                        "{} integrals, {}",
                        report.integral_count,
                        if report.bijective() {
                            "bijective"
                        } else {
                            "not bijective"
                        }
                    ),
                ))
            });
        }
    }
    if config.max_set >= 3 {
        let name = "rig.z2.x3".to_string();
        let cname = name.clone();
        add(checks, name, move |cfg| {
            let rig = RigSpec::zmod(2)?;
            let integrals = enumerate_integrals(&FiniteSet::new(3), &rig, cfg.caps.enumeration)?;
            Ok(CheckRecord::compare(
                &cname,
                "rig=z2 x=3",
                "4 linear integrals",
                format!("{} linear integrals", integrals.len()),
            ))
        });
        let name = "rig.boolean.x3".to_string();
        let cname = name.clone();
        add(checks, name, move |cfg| {
            let rig = RigSpec::boolean();
            let integrals = enumerate_integrals(&FiniteSet::new(3), &rig, cfg.caps.enumeration)?;
            Ok(CheckRecord::compare(
                &cname,
                "rig=boolean x=3",
                "7 linear integrals",
                format!("{} linear integrals", integrals.len()),
            ))
        });
    }
}

fn integration_checks(checks: &mut Vec<(String, CheckFn)>, config: &SuiteConfig) {
    for x in 0..=config.max_set.min(2) {
        for r in 1..=2 {
            let name = format!("integration.uniqueness.x{x}.r{r}");
            let cname = name.clone();
            add(checks, name, move |cfg| {
                let unique = uniqueness_of_integration(
                    &FiniteSet::new(x),
                    &FiniteSet::new(r),
                    cfg.caps.enumeration,
                )?;
                Ok(CheckRecord::compare(
                    &cname,
                    format!("x={x} omega={r}"),
                    "unique",
                    if unique { "unique" } else { "not unique" },
                ))
            });
        }
    }
}

fn unit_map(x: &FiniteSet) -> Result<FiniteMap> {
    let table = (0..x.size())
        .map(|i| unit(x, i).map(|u| u.witness()))
        .collect::<Result<Vec<_>>>()?;
    FiniteMap::new(x.clone(), ultrafilter_carrier(x), table)
}

fn functor_map(f: &FiniteMap) -> Result<FiniteMap> {
    let mut table = Vec::with_capacity(f.dom().size());
    for u in enumerate_ultrafilters(f.dom())? {
        table.push(pushforward(f, &u)?.witness());
    }
    FiniteMap::new(
        ultrafilter_carrier(f.dom()),
        ultrafilter_carrier(f.cod()),
        table,
    )
}

fn monad_checks(checks: &mut Vec<(String, CheckFn)>, config: &SuiteConfig) {
    for x in 0..=config.max_set.min(3) {
        let name = format!("ultrafilter.monad.unit.x{x}");
        let cname = name.clone();
        add(checks, name, move |_| {
            let set = FiniteSet::new(x);
            let ux = ultrafilter_carrier(&set);
            let mult = multiplication_map(&set)?;
            let identity = FiniteMap::identity(&ux);
            let left = mult.compose(&unit_map(&ux)?)? == identity;
            let right = mult.compose(&functor_map(&unit_map(&set)?)?)? == identity;
            Ok(CheckRecord::compare(
                &cname,
                format!("x={x}"),
                "unit laws hold",
                if left && right {
                    "unit laws hold"
                } else {
                    "unit laws fail"
                },
            ))
        });
    }
    for x in 0..=config.max_set.min(2) {
        let name = format!("ultrafilter.monad.assoc.x{x}");
        let cname = name.clone();
        add(checks, name, move |_| {
            let set = FiniteSet::new(x);
            let ux = ultrafilter_carrier(&set);
            let mult = multiplication_map(&set)?;
            let one_level_up = multiplication_map(&ux)?;
            let associative = mult.compose(&one_level_up)? == mult.compose(&functor_map(&mult)?)?;
            Ok(CheckRecord::compare(
                &cname,
                format!("x={x}"),
                "associative",
                if associative {
                    "associative"
                } else {
                    "not associative"
                },
            ))
        });
    }
    for x in 1..=config.max_set.min(3) {
        let name = format!("ultrafilter.monad.borger.x{x}");
        let cname = name.clone();
        add(checks, name, move |_| {
            let s = EndofunctorData::identity(x)?;
            let set = FiniteSet::new(x);
            let mut matches = true;
            for sigma in 0..x {
                if borger_alpha(&s, &set, sigma)? != *unit(&set, sigma)?.family() {
                    matches = false;
                }
            }
            Ok(CheckRecord::compare(
                &cname,
                format!("functor=identity x={x}"),
                "alpha is the unit",
                if matches {
                    "alpha is the unit"
                } else {
                    "alpha differs from the unit"
                },
            ))
        });
    }
    let name = "famset.monad.sweep".to_string();
    let cname = name.clone();
    let max_index = config.max_set.min(2);
    add(checks, name, move |cfg| {
        let report = monad_laws_report(max_index, 2, cfg.caps.enumeration)?;
        let expected_count: usize = (0..=max_index).map(|n| 3usize.pow(n as u32)).sum();
        Ok(CheckRecord::compare(
            &cname,
            format!("max_index={max_index} max_component=2"),
            format!("{expected_count} families, laws hold"),
            format!(
                "{} families, laws {}",
                report.families_checked,
                if report.all_hold() { "hold" } else { "fail" }
            ),
        ))
    });
}

fn zn_checks(checks: &mut Vec<(String, CheckFn)>) {
    let name = "zn.moduli-1-1000".to_string();
    let cname = name.clone();
    add(checks, name, move |_| {
        let mut passing = 0u32;
        for n in 1..=1000u64 {
            let report = zn_fields_codensity(n)?;
            if report.crt_bijective
                && report.kernel_is_nilradical
                && report.kernel_size == n / report.radical
            {
                passing += 1;
            }
        }
        Ok(CheckRecord::compare(
            &cname,
            "n=1..=1000",
            "1000 of 1000 moduli",
            format!("{passing} of 1000 moduli"),
        ))
    });
}

fn vect_checks(checks: &mut Vec<(String, CheckFn)>, config: &SuiteConfig) {
    let pairs: [(usize, usize); 5] = [(2, 0), (2, 1), (2, 2), (3, 0), (3, 1)];
    for (p, d) in pairs {
        if d > config.max_field_dim {
            continue;
        }
        let name = format!("vect.comparison.p{p}.d{d}");
        let cname = name.clone();
        add(checks, name, move |cfg| {
            let space = VectorSpace::new(PrimeField::new(p)?, d);
            let cmp = vect_comparison(space, cfg.skeleton_cap, &cfg.caps)?;
            Ok(CheckRecord::compare(
                &cname,
                format!("p={p} d={d} max_dim={}", cfg.skeleton_cap),
                format!("{} points, bijective", p.pow(d as u32)),
                format!(
                    "{} points, {}",
                    cmp.codensity_size,
                    if cmp.bijective() {
                        "bijective"
                    } else {
                        "not bijective"
                    }
                ),
            ))
        });
        let name = format!("vect.linearity.p{p}.d{d}");
        let cname = name.clone();
        add(checks, name, move |cfg| {
            let space = VectorSpace::new(PrimeField::new(p)?, d);
            let (elements, points) = vect_codensity_carrier(space, cfg.skeleton_cap, &cfg.caps)?;
            Ok(CheckRecord::compare(
                &cname,
                format!("p={p} d={d} max_dim={}", cfg.skeleton_cap),
                "linear",
                if linearity_for_free(&elements, &points, cfg.caps.enumeration)? {
                    "linear"
                } else {
                    "not linear"
                },
            ))
        });
        let name = format!("vect.dual-monad.p{p}.d{d}");
        let cname = name.clone();
        add(checks, name, move |cfg| {
            let report = dual_monad_report(PrimeField::new(p)?, d, cfg.caps.enumeration)?;
            Ok(CheckRecord::compare(
                &cname,
                format!("p={p} d={d}"),
                "laws hold",
                if report.all_hold() {
                    "laws hold"
                } else {
                    "laws fail"
                },
            ))
        });
    }
}

fn famset_checks(checks: &mut Vec<(String, CheckFn)>, config: &SuiteConfig) {
    let name = "famset.collapse.exhaustive".to_string();
    let cname = name.clone();
    let max_index = config.max_set.min(3);
    add(checks, name, move |cfg| {
        let mut instances = 0usize;
        let mut failures = 0usize;
        for n in 0..=max_index {
            let mut sizes = vec![0usize; n];
            loop {
                let family = FamObject::from_fiber_sizes(sizes.clone());
                for (w, &fiber) in sizes.iter().enumerate() {
                    instances += 1;
                    let u = Ultrafilter::principal(family.index().clone(), w)?;
                    let up = ultraproduct(&family, &u, cfg.caps.enumeration)?;
                    if up.size() != fiber || up.collapse_to_witness().is_err() {
                        failures += 1;
                    }
                }
                let mut slot = 0;
                while slot < n && sizes[slot] == 3 {
                    sizes[slot] = 0;
                    slot += 1;
                }
                if slot == n {
                    break;
                }
                sizes[slot] += 1;
            }
        }
        Ok(CheckRecord::compare(
            &cname,
            format!("indices 0..={max_index}, fibers 0..=3"),
            format!("0 of {instances} instances fail"),
            format!("{failures} of {instances} instances fail"),
        ))
    });
    let name = "famset.barr.empty-fiber".to_string();
    let cname = name.clone();
    add(checks, name, move |cfg| {
        let family = FamObject::from_fiber_sizes(vec![0, 1]);
        let at_empty = ultraproduct(
            &family,
            &Ultrafilter::principal(family.index().clone(), 0)?,
            cfg.caps.enumeration,
        )?
        .size();
        let at_point = ultraproduct(
            &family,
            &Ultrafilter::principal(family.index().clone(), 1)?,
            cfg.caps.enumeration,
        )?
        .size();
        Ok(CheckRecord::compare(
            &cname,
            "family=[0,1]",
            "sizes 0 and 1",
            format!("sizes {at_empty} and {at_point}"),
        ))
    });
    let name = "famset.routes.random".to_string();
    let cname = name.clone();
    add(checks, name, move |cfg| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x726f_7574_6573);
        let sizes = [1usize, 2, 3];
        let total = 200u32;
        let mut agreeing = 0u32;
        for _ in 0..total {
            let family = loop {
                let candidate = sample::fam_object(&mut rng, 3, 3);
                if candidate.index().size() > 0 {
                    break candidate;
                }
            };
            let witness = rng.random_range(0..family.index().size());
            let u = Ultrafilter::principal(family.index().clone(), witness)?;
            if ultraproduct_routes_agree(&family, &u, &sizes, &cfg.caps)?.agree() {
                agreeing += 1;
            }
        }
        Ok(CheckRecord::compare(
            &cname,
            format!("seed={} subcat=[1,2,3]", cfg.seed),
            format!("{total} of {total} agree"),
            format!("{agreeing} of {total} agree"),
        ))
    });
    let name = "famset.functor.random".to_string();
    let cname = name.clone();
    add(checks, name, move |cfg| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6675_6e63);
        let cap = cfg.caps.enumeration;
        let total = 30u32;
        let mut preserving = 0u32;
        for _ in 0..total {
            let (first, second) = loop {
                let a = sample::fam_object(&mut rng, 2, 2);
                let b = sample::fam_object(&mut rng, 2, 2);
                let c = sample::fam_object(&mut rng, 2, 2);
                let Ok(first) = sample::fam_morphism(&mut rng, &a, &b) else {
                    continue;
                };
                let Ok(second) = sample::fam_morphism(&mut rng, &b, &c) else {
                    continue;
                };
                break (first, second);
            };
            let composite = v_on_morphism(&second.compose(&first)?, cap)?;
            let staged = v_on_morphism(&second, cap)?.compose(&v_on_morphism(&first, cap)?)?;
            let v_identity = v_on_morphism(&FamMorphism::identity(first.dom()), cap)?;
            let identity_image = FamMorphism::identity(&v_on_object(first.dom(), cap)?.object);
            if composite == staged && v_identity == identity_image {
                preserving += 1;
            }
        }
        Ok(CheckRecord::compare(
            &cname,
            format!("seed={} index<=2 fibers<=2", cfg.seed),
            format!("{total} of {total} preserve identities and composition"),
            format!("{preserving} of {total} preserve identities and composition"),
        ))
    });
}
