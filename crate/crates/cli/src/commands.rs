use std::path::{Path, PathBuf};

use quillen_core::analysis::{
    connectivity_report, group_p_rank, mvles_report, poset_homology, AnalysisConfig, Pipeline,
    QdVerdict, QD_CSV_HEADER,
};
use quillen_core::atlas::{
    affine_line, alternating, cyclic, dihedral, extend, fixture_files, load_group_file,
    projective_group, symmetric, ExtensionDescriptor, Family, Kind, LabeledGroup,
};
use quillen_core::formulas::{
    prime_power, summary_table, verify_family, verify_suite, VerifyRow, VERIFY_CSV_HEADER,
};
use quillen_core::homology::{
    csv_row_from_counts, euler_from_classes, euler_from_f_vector, CSV_HEADER,
};
use quillen_core::permgroup::p_core;
use quillen_core::poset::{
    build_quillen_poset, class_summaries, cone_point_removal, core_reduction,
};
use quillen_core::{Error, Result};

use crate::cache::{self, Cache, Record};
use crate::{GroupArgs, RunConfig, Status};

fn build(args: &GroupArgs, cfg: &RunConfig) -> Result<(LabeledGroup, Option<ExtensionDescriptor>)> {
    if let Some(path) = &args.file {
        return Ok((load_group_file(path)?, None));
    }
    let (Some(family), Some(q)) = (&args.family, args.q) else {
        return Err(Error::Config("give --family and --q, or --file".into()));
    };
    let family: Family = family.parse()?;
    let n = q as usize;
    let base = match family {
        Family::Sym => symmetric(n)?,
        Family::Alt => alternating(n)?,
        Family::Cyclic => cyclic(n)?,
        Family::Dihedral => dihedral(n)?,
        Family::Affine => affine_line(q)?,
        _ => projective_group(family, q)?,
    };
    if args.extend.is_empty() {
        return Ok((base, None));
    }
    let kinds = args
        .extend
        .iter()
        .map(|k| k.parse())
        .collect::<Result<Vec<Kind>>>()?;
    let (g, desc) = extend(&base, &kinds, &cfg.analysis.caps)?;
    Ok((g, Some(desc)))
}

fn open_cache(cfg: &RunConfig) -> Result<Option<Cache>> {
    cfg.cache_dir.as_deref().map(Cache::new).transpose()
}

/// Poset homology of `g`, from the cache when possible.
fn analyze(g: &LabeledGroup, cfg: &RunConfig, want_classes: bool) -> Result<Record> {
    analyze_with(
        g,
        cfg.p,
        &cfg.analysis,
        open_cache(cfg)?.as_ref(),
        want_classes,
    )
}

fn analyze_with(
    g: &LabeledGroup,
    p: u32,
    config: &AnalysisConfig,
    cache: Option<&Cache>,
    want_classes: bool,
) -> Result<Record> {
    let key = cache::key(&g.group, p, config.pipeline, &config.betti);
    if let Some(r) = cache.and_then(|c| c.load(&key)) {
        if !want_classes || r.chi_classes.is_some() {
            return Ok(r);
        }
    }
    let h = poset_homology(&g.group, p, config)?;
    let chi_classes = if want_classes {
        let classes = class_summaries(&h.poset, &g.group, &config.caps)?;
        Some(euler_from_classes(&classes, p))
    } else {
        None
    };
    let record = Record {
        f_vector: h.complex.f_vector(),
        betti: h.betti,
        p_rank: h.poset.max_rank(),
        components: h.poset.components().len(),
        chi_classes,
    };
    if let Some(c) = cache {
        c.store(&key, &record, &h.working.dump())?;
    }
    Ok(record)
}

pub fn group(args: &GroupArgs, cfg: &RunConfig) -> Result<Status> {
    let (g, _) = build(args, cfg)?;
    let caps = &cfg.analysis.caps;
    let p = cfg.p;
    let m = group_p_rank(&g.group, p, caps)?;
    let core = p_core(&g.group, p, caps)?;
    if cfg.csv {
        println!("group,degree,order,p,p_rank,p_core_order");
        println!(
            "{},{},{},{p},{m},{}",
            g.name.replace(',', ";"),
            g.degree(),
            g.order(),
            core.order()
        );
    } else {
        println!("name      {}", g.name);
        println!("degree    {}", g.degree());
        println!("order     {}", g.order());
        println!("m_{p}       {m}");
        println!("{p}-core    order {}", core.order());
    }
    Ok(Status::Ok)
}

pub fn qd(args: &GroupArgs, cfg: &RunConfig) -> Result<Status> {
    let (g, _) = build(args, cfg)?;
    let r = analyze(&g, cfg, false)?;
    let core = p_core(&g.group, cfg.p, &cfg.analysis.caps)?;
    let v = QdVerdict::new(
        &g.name,
        cfg.p,
        r.p_rank,
        r.betti,
        core.order().clone(),
        r.components,
    )?;
    if cfg.csv {
        println!("{QD_CSV_HEADER}");
        println!("{}", v.csv_row());
    } else {
        print!("{}", v.text());
    }
    Ok(Status::Ok)
}

pub fn betti(args: &GroupArgs, cfg: &RunConfig) -> Result<Status> {
    let (g, _) = build(args, cfg)?;
    let r = analyze(&g, cfg, true)?;
    let chi_faces = euler_from_f_vector(&r.f_vector);
    let chi_classes = r.chi_classes.clone().expect("requested");
    if cfg.csv {
        println!("{CSV_HEADER}");
        println!(
            "{}",
            csv_row_from_counts(&g.name, cfg.p, &r.f_vector, &r.betti, Some(&chi_classes))
        );
    } else {
        let f: Vec<String> = r.f_vector.iter().map(|x| x.to_string()).collect();
        println!("group          {}", g.name);
        println!("p              {}", cfg.p);
        println!("f-vector       {}", f.join(" "));
        println!("betti          {}", r.betti.vector_string());
        println!("chi (faces)    {chi_faces}");
        println!("chi (classes)  {chi_classes}");
        println!("backend        {}", r.betti.backend);
    }
    if chi_faces != chi_classes || chi_faces != r.betti.euler() {
        eprintln!("Euler characteristics disagree");
        return Ok(Status::Mismatch);
    }
    Ok(Status::Ok)
}

pub fn poset(args: &GroupArgs, cfg: &RunConfig) -> Result<Status> {
    let (g, _) = build(args, cfg)?;
    let config = &cfg.analysis;
    if let Some(cache) = open_cache(cfg)? {
        let key = cache::key(&g.group, cfg.p, config.pipeline, &config.betti);
        if let Some(dump) = cache.dump(&key) {
            print!("{dump}");
            return Ok(Status::Ok);
        }
    }
    let mut poset = build_quillen_poset(&g.group, cfg.p, &config.caps)?;
    if config.pipeline.core {
        poset = core_reduction(&poset, &g.group, &config.caps)?;
    }
    if config.pipeline.cone {
        poset = cone_point_removal(&poset);
    }
    print!("{}", poset.dump());
    Ok(Status::Ok)
}

pub fn components(args: &GroupArgs, cfg: &RunConfig) -> Result<Status> {
    let (g, _) = build(args, cfg)?;
    let r = connectivity_report(&g, cfg.p, &cfg.analysis)?;
    if cfg.csv {
        println!("group,p,components,p_rank,declared,consistent");
        println!(
            "{},{},{},{},{},{}",
            r.name.replace(',', ";"),
            r.p,
            r.components,
            r.p_rank,
            r.declared.map_or("unknown".to_string(), |d| d.to_string()),
            r.consistent
        );
    } else {
        print!("{}", r.text());
    }
    Ok(if r.consistent {
        Status::Ok
    } else {
        Status::Mismatch
    })
}

pub fn mvles(args: &GroupArgs, cfg: &RunConfig) -> Result<Status> {
    let (g, desc) = build(args, cfg)?;
    let Some(desc) = desc else {
        return Err(Error::Config("mvles needs --extend".into()));
    };
    let r = mvles_report(&g.group, &desc.base.group, cfg.p, &cfg.analysis)?;
    print!("{}: {}", g.name, r.text());
    Ok(if r.consistent() {
        Status::Ok
    } else {
        Status::Mismatch
    })
}

pub struct VerifyArgs {
    pub suite: Option<String>,
    pub family: Option<String>,
    pub q: Vec<u64>,
    pub q_max: Option<u64>,
    pub file: Option<PathBuf>,
    pub allow_hours: bool,
    pub summary: Option<PathBuf>,
}

/// Odd prime powers from `low` to `high`.
fn odd_prime_powers_between(low: u64, high: u64) -> Vec<u64> {
    (low..=high)
        .filter(|&q| q % 2 == 1 && prime_power(q).is_some())
        .collect()
}

pub fn verify(args: &VerifyArgs, cfg: &RunConfig) -> Result<Status> {
    let rows = match (&args.suite, &args.family) {
        (Some(suite), _) if suite == "g2_3" => g2_3_rows(args, cfg)?,
        (Some(suite), _) => verify_suite(suite, &cfg.analysis)?,
        (None, Some(family)) => {
            let qs = match (args.q.is_empty(), args.q_max) {
                (false, _) => args.q.clone(),
                (true, Some(q_max)) => match family.as_str() {
                    "ree-euler" | "psu3-bound" => vec![q_max],
                    "PSL2" | "PGL2" => odd_prime_powers_between(5, q_max),
                    _ => odd_prime_powers_between(3, q_max),
                },
                (true, None) => return Err(Error::Config("give --q or --q-max".into())),
            };
            verify_family(family, &qs, &cfg.analysis)?
        }
        (None, None) => return Err(Error::Config("give --suite or --family".into())),
    };
    println!("{VERIFY_CSV_HEADER}");
    for r in &rows {
        println!("{}", r.csv());
    }
    let summary = summary_table(&rows);
    eprint!("{summary}");
    if let Some(path) = &args.summary {
        std::fs::write(path, &summary)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(if rows.iter().any(VerifyRow::failed) {
        Status::Mismatch
    } else {
        Status::Ok
    })
}

/// The wedge-of-spheres check for `G2(3)` at `p = 2`, run on the core with
/// cone points removed.
fn g2_3_rows(args: &VerifyArgs, cfg: &RunConfig) -> Result<Vec<VerifyRow>> {
    if !args.allow_hours {
        return Err(Error::Config(
            "the g2_3 suite runs for hours; pass --allow-hours".into(),
        ));
    }
    let path = args
        .file
        .clone()
        .or_else(|| std::env::var_os("QUILLEN_G2_3").map(PathBuf::from))
        .ok_or_else(|| Error::Config("the g2_3 suite needs --file g2_3.grp".into()))?;
    let g = load_group_file(&path)?;
    let config = AnalysisConfig {
        pipeline: Pipeline {
            core: true,
            cone: true,
        },
        ..cfg.analysis.clone()
    };
    let r = analyze_with(&g, 2, &config, open_cache(cfg)?.as_ref(), false)?;
    Ok(vec![
        VerifyRow::compare("g2_3.order", 3, 4_245_696u64, g.order()),
        VerifyRow::compare("g2_3.chi", 3, -11584, r.betti.euler()),
        VerifyRow::compare("g2_3.b1", 3, 11584, r.betti.get(1)),
        VerifyRow::compare("g2_3.b2", 3, 0, r.betti.get(2)),
    ])
}

pub fn fixture(dir: &Path) -> Result<Status> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    for (name, contents) in fixture_files(&Default::default())? {
        let path = dir.join(&name);
        std::fs::write(&path, contents)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        println!("{}", path.display());
    }
    Ok(Status::Ok)
}
