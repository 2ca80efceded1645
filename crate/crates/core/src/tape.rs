//! Bi-infinite tapes over the alphabet `{0, 1, *}` where `*` is the blank.
//!
//! A tape is almost-always blank, so it is stored as a finite window of cells
//! together with the window index of tape position 0 (the `origin`).  The
//! window never starts or ends with a blank and an empty window has origin 0,
//! which makes structural equality coincide with extensional equality of the
//! underlying `Z -> {0,1,*}` functions.
//!
//! Textual form: cells left to right, with `^` prefixing the cell at position
//! 0 whenever that cell is not the leftmost one rendered.  `1^01` is the tape
//! with content `101` whose middle cell sits at position 0; `101` alone puts
//! the origin on the leading `1`.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
    Blank,
}

impl Symbol {
    pub fn to_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Blank => '*',
        }
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            '0' => Some(Symbol::Zero),
            '1' => Some(Symbol::One),
            '*' | '⋆' => Some(Symbol::Blank),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tape {
    cells: Vec<Symbol>,
    origin: i64,
}

impl Tape {
    /// The all-blank tape.
    pub fn blank() -> Tape {
        Tape { cells: Vec::new(), origin: 0 }
    }

    /// Builds a tape from `(position, symbol)` pairs; unlisted positions are
    /// blank and later entries overwrite earlier ones.
    pub fn from_cells<I: IntoIterator<Item = (i64, Symbol)>>(pairs: I) -> Tape {
        let mut support: Vec<(i64, Symbol)> = Vec::new();
        for (pos, sym) in pairs {
            if let Some(slot) = support.iter_mut().find(|(p, _)| *p == pos) {
                slot.1 = sym;
            } else {
                support.push((pos, sym));
            }
        }
        support.retain(|(_, s)| *s != Symbol::Blank);
        if support.is_empty() {
            return Tape::blank();
        }
        let lo = support.iter().map(|(p, _)| *p).min().unwrap();
        let hi = support.iter().map(|(p, _)| *p).max().unwrap();
        let mut cells = vec![Symbol::Blank; (hi - lo + 1) as usize];
        for (pos, sym) in support {
            cells[(pos - lo) as usize] = sym;
        }
        Tape { cells, origin: -lo }
    }

    fn normalized(mut cells: Vec<Symbol>, mut origin: i64) -> Tape {
        let lead = cells.iter().take_while(|s| **s == Symbol::Blank).count();
        cells.drain(..lead);
        origin -= lead as i64;
        while cells.last() == Some(&Symbol::Blank) {
            cells.pop();
        }
        if cells.is_empty() {
            origin = 0;
        }
        Tape { cells, origin }
    }

    pub fn symbol_at(&self, pos: i64) -> Symbol {
        let idx = pos + self.origin;
        if idx >= 0 && (idx as usize) < self.cells.len() {
            self.cells[idx as usize]
        } else {
            Symbol::Blank
        }
    }

    /// Non-blank extent as `(cells, position of the first cell)`.
    pub fn window(&self) -> (&[Symbol], i64) {
        (&self.cells, -self.origin)
    }

    /// Moves content one position to the right: afterwards position `p` holds
    /// what position `p - 1` held.  On the stored window this only decrements
    /// the origin index.
    pub fn shift_right(&self) -> Tape {
        if self.cells.is_empty() {
            return Tape::blank();
        }
        Tape { cells: self.cells.clone(), origin: self.origin - 1 }
    }

    /// Inverse of [`Tape::shift_right`]: position `p` ends up holding what
    /// position `p + 1` held, so repeated left shifts scan ascending positions.
    pub fn shift_left(&self) -> Tape {
        if self.cells.is_empty() {
            return Tape::blank();
        }
        Tape { cells: self.cells.clone(), origin: self.origin + 1 }
    }

    /// Overwrites position 0 with `sym`.
    pub fn write(&self, sym: Symbol) -> Tape {
        let mut cells = self.cells.clone();
        let mut origin = self.origin;
        if origin < 0 {
            let pad = (-origin) as usize;
            let mut padded = vec![Symbol::Blank; pad];
            padded.append(&mut cells);
            cells = padded;
            origin = 0;
        }
        if origin as usize >= cells.len() {
            cells.resize(origin as usize + 1, Symbol::Blank);
        }
        cells[origin as usize] = sym;
        Tape::normalized(cells, origin)
    }

    /// Guard: defined exactly when position 0 holds `sym`.
    pub fn read(&self, sym: Symbol) -> Option<Tape> {
        (self.symbol_at(0) == sym).then(|| self.clone())
    }

    pub fn render(&self) -> String {
        if self.cells.is_empty() {
            return "*".into();
        }
        let first = -self.origin;
        let last = self.cells.len() as i64 - 1 - self.origin;
        let lo = first.min(0);
        let hi = last.max(0);
        let mut out = String::new();
        for p in lo..=hi {
            if p == 0 && lo < 0 {
                out.push('^');
            }
            out.push(self.symbol_at(p).to_char());
        }
        out
    }

    pub fn parse(text: &str) -> Result<Tape> {
        let mut cells = Vec::new();
        let mut caret: Option<usize> = None;
        for c in text.trim().chars() {
            if c == '^' {
                if caret.is_some() {
                    return Err(Error::Parse("tape literal has two carets".into()));
                }
                caret = Some(cells.len());
                continue;
            }
            match Symbol::from_char(c) {
                Some(s) => cells.push(s),
                None => return Err(Error::Parse(format!("bad tape symbol `{c}`"))),
            }
        }
        if cells.is_empty() {
            return Err(Error::Parse("empty tape literal".into()));
        }
        if caret == Some(cells.len()) {
            return Err(Error::Parse("dangling caret in tape literal".into()));
        }
        Ok(Tape::normalized(cells, caret.unwrap_or(0) as i64))
    }
}

impl std::fmt::Display for Tape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}
