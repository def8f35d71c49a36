//! Text and LaTeX renderings of an [`Expression`], registered by format name.

use crate::error::{Error, Result};
use crate::expression::{Expression, Factor, GExpansionTerm};
use crate::profile::ClassVector;

pub trait Renderer: Send + Sync {
    fn name(&self) -> &'static str;
    fn render(&self, e: &Expression) -> String;
}

fn join<T, F: Fn(&T) -> String>(items: &[T], sep: &str, f: F) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(sep)
}

fn shifted_arg(symbol: &str, offset: i64) -> String {
    match offset {
        0 => symbol.to_string(),
        o if o > 0 => format!("{symbol}+{o}"),
        o => format!("{symbol}{o}"),
    }
}

/// Plain ASCII, one definition per line.
pub struct TextRenderer;

impl TextRenderer {
    fn s(v: ClassVector) -> String {
        format!("s{}", v.subscript())
    }

    fn t(v: ClassVector) -> String {
        format!("t{}", v.subscript())
    }

    fn factor(e: &Expression, f: &Factor) -> String {
        let args = e
            .indices
            .iter()
            .zip(&f.offsets)
            .map(|(&v, &o)| shifted_arg(&Self::s(v), o))
            .collect::<Vec<_>>()
            .join(", ");
        format!("g({args})^{}", Self::s(f.exponent))
    }

    fn block(b: &[usize]) -> String {
        format!("f{}", join(b, ",", |r| r.to_string()))
    }

    fn g_term(i: usize, t: &GExpansionTerm) -> String {
        let product = join(&t.blocks, "*", |b| Self::block(b));
        let mag = t.coefficient.abs();
        let body = if mag == 1 { product } else { format!("{mag}*{product}") };
        match (i, t.coefficient < 0) {
            (0, false) => body,
            (0, true) => format!("-{body}"),
            (_, false) => format!(" + {body}"),
            (_, true) => format!(" - {body}"),
        }
    }
}

impl Renderer for TextRenderer {
    fn name(&self) -> &'static str {
        "text"
    }

    fn render(&self, e: &Expression) -> String {
        let indices = join(&e.indices, "+", |&v| Self::s(v));
        let sign = if e.sign_exponent.len() == 1 && e.sign_exponent[0].0 == 1 {
            Self::s(e.sign_exponent[0].1)
        } else {
            let terms = join(&e.sign_exponent, " + ", |&(w, v)| {
                if w == 1 {
                    Self::s(v)
                } else {
                    format!("{w}*{}", Self::s(v))
                }
            });
            format!("({terms})")
        };
        let multinomial = format!("multinomial(n; {})", join(&e.indices, ", ", |&v| Self::s(v)));
        let factors = join(&e.factors, " * ", |f| Self::factor(e, f));
        let t_args = join(&e.indices, ", ", |&v| Self::t(v));
        let g_body: String = e
            .g_expansion
            .iter()
            .enumerate()
            .map(|(i, t)| Self::g_term(i, t))
            .collect();
        let mut out = format!(
            "R_{k}(n) = sum over {indices}=n of (-1)^{sign} * {multinomial} * {factors}\n  where g({t_args}) = {g_body}\n",
            k = e.k
        );
        for b in &e.block_sums {
            out.push_str(&format!(
                "  {} = {}\n",
                Self::block(&b.block),
                join(&b.classes, " + ", |&v| Self::t(v))
            ));
        }
        out
    }
}

/// Display math for a plain article-class document; no packages needed.
pub struct LatexRenderer;

impl LatexRenderer {
    fn sym(letter: char, v: ClassVector) -> String {
        format!("{letter}_{{{}}}", v.subscript())
    }

    fn block(b: &[usize]) -> String {
        format!("f_{{{}}}", join(b, ",", |r| r.to_string()))
    }
}

impl Renderer for LatexRenderer {
    fn name(&self) -> &'static str {
        "latex"
    }

    fn render(&self, e: &Expression) -> String {
        let s = |v: ClassVector| Self::sym('s', v);
        let indices = join(&e.indices, "+", |&v| s(v));
        let sign = join(&e.sign_exponent, "+", |&(w, v)| {
            if w == 1 {
                s(v)
            } else {
                format!("{w}{}", s(v))
            }
        });
        let multinomial = format!("{{n \\choose {{{}}}}}", join(&e.indices, ",", |&v| s(v)));
        let factors = join(&e.factors, " \\cdot ", |f| {
            let args = e
                .indices
                .iter()
                .zip(&f.offsets)
                .map(|(&v, &o)| shifted_arg(&s(v), o))
                .collect::<Vec<_>>()
                .join(",");
            format!("g({args})^{{{}}}", s(f.exponent))
        });
        let t_args = join(&e.indices, ",", |&v| Self::sym('t', v));
        let g_body: String = e
            .g_expansion
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let product = join(&t.blocks, " ", |b| Self::block(b));
                let mag = t.coefficient.abs();
                let body = if mag == 1 { product } else { format!("{mag} {product}") };
                match (i, t.coefficient < 0) {
                    (0, false) => body,
                    (0, true) => format!("-{body}"),
                    (_, false) => format!(" + {body}"),
                    (_, true) => format!(" - {body}"),
                }
            })
            .collect();
        let blocks = join(&e.block_sums, ",\\\\\n", |b| {
            format!(
                "{} &=& {}",
                Self::block(&b.block),
                join(&b.classes, " + ", |&v| Self::sym('t', v))
            )
        });
        format!(
            "\\[\nR_{{{k}}}(n) = \\sum_{{{indices}=n}} (-1)^{{{sign}}} {multinomial} \\cdot {factors}\n\\]\nwhere\n\\[\ng({t_args}) = {g_body}\n\\]\nand\n\\begin{{eqnarray*}}\n{blocks}.\n\\end{{eqnarray*}}\n",
            k = e.k
        )
    }
}

/// Name-indexed collection of renderers.
pub struct RendererRegistry {
    renderers: Vec<Box<dyn Renderer>>,
}

impl RendererRegistry {
    pub fn with_builtin() -> Self {
        let mut r = RendererRegistry { renderers: Vec::new() };
        r.register(Box::new(TextRenderer));
        r.register(Box::new(LatexRenderer));
        r
    }

    pub fn register(&mut self, renderer: Box<dyn Renderer>) {
        self.renderers.retain(|r| r.name() != renderer.name());
        self.renderers.push(renderer);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Renderer> {
        self.renderers
            .iter()
            .find(|r| r.name() == name)
            .map(|r| r.as_ref())
            .ok_or_else(|| Error::UnknownFormat(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.renderers.iter().map(|r| r.name()).collect()
    }
}

impl Default for RendererRegistry {
    fn default() -> Self {
        Self::with_builtin()
    }
}

/// Renders `e` in the named format.
pub fn render(e: &Expression, format: &str) -> Result<String> {
    Ok(RendererRegistry::with_builtin().get(format)?.render(e))
}

/// Whether `(){}[]` nest properly in `s`.
pub fn delimiters_balanced(s: &str) -> bool {
    let mut stack = Vec::new();
    for c in s.chars() {
        match c {
            '(' | '{' | '[' => stack.push(c),
            ')' | '}' | ']' => {
                let open = match c {
                    ')' => '(',
                    '}' => '{',
                    _ => '[',
                };
                if stack.pop() != Some(open) {
                    return false;
                }
            }
            _ => {}
        }
    }
    stack.is_empty()
}
