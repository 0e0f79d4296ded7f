//! Configurations observed on finite windows.

use thiserror::Error;

use crate::group::{ElementSet, Group};

/// Index into an [`Alphabet`].
pub type Symbol = u8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new(symbols: Vec<String>) -> Result<Self, ConfigurationError> {
        if symbols.is_empty() || symbols.len() > Symbol::MAX as usize + 1 {
            return Err(ConfigurationError::BadAlphabet(symbols.len()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) || symbols[..i].contains(s) {
                return Err(ConfigurationError::BadSymbolName(s.clone()));
            }
        }
        Ok(Self { symbols })
    }

    pub fn binary() -> Self {
        Self::numeric(2)
    }

    /// Symbols `0, 1, …, n-1`.
    pub fn numeric(n: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string()).collect()).expect("valid numeric alphabet")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.symbols[s as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.symbols.iter().position(|s| s == name).map(|i| i as Symbol)
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigurationError {
    #[error("alphabet must have between 1 and 256 symbols, got {0}")]
    BadAlphabet(usize),
    #[error("invalid alphabet symbol `{0}`")]
    BadSymbolName(String),
    #[error("symbol index {0} outside alphabet of size {1}")]
    SymbolOutOfRange(Symbol, usize),
    #[error("window has {0} sites but {1} values were given")]
    LengthMismatch(usize, usize),
}

/// A map from a finite window of the group to an alphabet.
///
/// With a `background` symbol set, the configuration is total on the whole
/// group: every site outside the window carries the background symbol. This
/// represents finitely supported configurations without materializing them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowConfiguration<E> {
    window: ElementSet<E>,
    values: Vec<Symbol>,
    alphabet: Alphabet,
    background: Option<Symbol>,
}

impl<E: Clone + Eq + std::hash::Hash> WindowConfiguration<E> {
    pub fn new(
        window: ElementSet<E>,
        values: Vec<Symbol>,
        alphabet: Alphabet,
    ) -> Result<Self, ConfigurationError> {
        if window.len() != values.len() {
            return Err(ConfigurationError::LengthMismatch(window.len(), values.len()));
        }
        if let Some(&bad) = values.iter().find(|&&v| v as usize >= alphabet.len()) {
            return Err(ConfigurationError::SymbolOutOfRange(bad, alphabet.len()));
        }
        Ok(Self {
            window,
            values,
            alphabet,
            background: None,
        })
    }

    pub fn constant(window: ElementSet<E>, symbol: Symbol, alphabet: Alphabet) -> Self {
        let values = vec![symbol; window.len()];
        Self::new(window, values, alphabet).expect("constant configuration is well formed")
    }

    pub fn from_fn(
        window: ElementSet<E>,
        alphabet: Alphabet,
        mut f: impl FnMut(&E) -> Symbol,
    ) -> Self {
        let values = window.iter().map(&mut f).collect();
        Self::new(window, values, alphabet).expect("from_fn produced an out-of-range symbol")
    }

    pub fn with_background(mut self, background: Symbol) -> Self {
        assert!((background as usize) < self.alphabet.len());
        self.background = Some(background);
        self
    }

    /// Binary configuration with 1's exactly at `ones` and 0 everywhere else
    /// on the group.
    pub fn finite_support<G: Group<Element = E>>(group: &G, ones: impl IntoIterator<Item = E>) -> Self {
        let window = ElementSet::from_iter_in(group, ones);
        Self::constant(window, 1, Alphabet::binary()).with_background(0)
    }

    pub fn window(&self) -> &ElementSet<E> {
        &self.window
    }

    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn background(&self) -> Option<Symbol> {
        self.background
    }

    /// Value at `g`, or `None` when `g` is outside the window and no
    /// background is declared.
    pub fn get(&self, g: &E) -> Option<Symbol> {
        match self.window.position(g) {
            Some(i) => Some(self.values[i]),
            None => self.background,
        }
    }

    pub fn covers(&self, g: &E) -> bool {
        self.background.is_some() || self.window.contains(g)
    }

    pub fn is_one(&self, g: &E) -> bool {
        self.get(g) == Some(1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, Symbol)> {
        self.window.iter().zip(self.values.iter().copied())
    }

    /// Window sites carrying symbol 1, canonical order.
    pub fn ones(&self) -> impl Iterator<Item = &E> {
        self.iter().filter(|(_, v)| *v == 1).map(|(g, _)| g)
    }

    /// `g·c`, i.e. `(g·c)(g·w) = c(w)`.
    pub fn translate<G: Group<Element = E>>(&self, group: &G, g: &E) -> Self {
        let window = self.window.translate(group, g);
        let gi = group.inv(g);
        let values = window
            .iter()
            .map(|a| self.values[self.window.position(&group.mul(&gi, a)).unwrap()])
            .collect();
        Self {
            window,
            values,
            alphabet: self.alphabet.clone(),
            background: self.background,
        }
    }

    /// Restriction to `sites`; `None` if some site is not covered.
    pub fn restrict<G: Group<Element = E>>(&self, group: &G, sites: &ElementSet<E>) -> Option<Self> {
        let values = sites.iter().map(|g| self.get(g)).collect::<Option<Vec<_>>>()?;
        let window = ElementSet::from_iter_in(group, sites.iter().cloned());
        Some(Self {
            window,
            values,
            alphabet: self.alphabet.clone(),
            background: None,
        })
    }
}
