//! OMDL, a small declarative language for class models.
//!
//! ```text
//! document   := { class_decl } ;
//! class_decl := "class" IDENT [ "extends" ident_list ] "{" { member } "}" ;
//! ident_list := IDENT { "," IDENT } ;
//! member     := method_decl | attr_decl | uses_decl ;
//! method_decl:= [ visibility ] "method" IDENT [ "overrides" IDENT "." IDENT ] ";" ;
//! attr_decl  := [ visibility ] "attribute" IDENT ";" ;
//! uses_decl  := "uses" ident_list ";" ;
//! visibility := "visible" | "hidden" ;
//! ```
//!
//! `//` starts a comment that runs to the end of the line. Omitting the
//! visibility keyword means `visible`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::iter::Peekable;
use std::str::CharIndices;

use serde::Serialize;
use thiserror::Error;

use crate::model::{
    AttributeDecl, ClassDecl, ClassModel, MethodDecl, MethodKind, OverrideTarget, Visibility,
};

/// 1-based line and column (columns count characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub position: Span,
    pub expected: String,
    pub found: String,
}

/// A declaration that carries a source span.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DeclRef {
    Class(String),
    Method { class: String, method: String },
    Attribute { class: String, attribute: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmdlDocument {
    pub model: ClassModel,
    pub spans: BTreeMap<DeclRef, Span>,
}

impl OmdlDocument {
    pub fn span_of(&self, decl: &DeclRef) -> Option<Span> {
        self.spans.get(decl).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Keyword {
    Class,
    Extends,
    Method,
    Attribute,
    Uses,
    Overrides,
    Visible,
    Hidden,
}

impl Keyword {
    fn from_ident(s: &str) -> Option<Self> {
        Some(match s {
            "class" => Keyword::Class,
            "extends" => Keyword::Extends,
            "method" => Keyword::Method,
            "attribute" => Keyword::Attribute,
            "uses" => Keyword::Uses,
            "overrides" => Keyword::Overrides,
            "visible" => Keyword::Visible,
            "hidden" => Keyword::Hidden,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Kw(Keyword),
    LBrace,
    RBrace,
    Comma,
    Semi,
    Dot,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
    lexeme: String,
}

impl Token {
    fn found(&self) -> String {
        match self.tok {
            Tok::Eof => "end of input".to_owned(),
            _ => format!("`{}`", self.lexeme),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    chars: Peekable<CharIndices<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            chars: src.char_indices().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<(usize, char)> {
        let next = self.chars.next();
        if let Some((_, c)) = next {
            if c == '\n' {
                self.line += 1;
                self.column = 1;
            } else {
                self.column += 1;
            }
        }
        next
    }

    fn here(&self) -> Span {
        Span {
            line: self.line,
            column: self.column,
        }
    }

    fn skip_trivia(&mut self) -> Result<(), ParseError> {
        loop {
            match self.chars.peek() {
                Some(&(_, c)) if c.is_whitespace() => {
                    self.bump();
                }
                Some(&(i, '/')) => {
                    if self.src[i + 1..].starts_with('/') {
                        while let Some(&(_, c)) = self.chars.peek() {
                            if c == '\n' {
                                break;
                            }
                            self.bump();
                        }
                    } else {
                        return Err(ParseError {
                            position: self.here(),
                            expected: "a token".into(),
                            found: "`/`".into(),
                        });
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn next_token(&mut self) -> Result<Token, ParseError> {
        self.skip_trivia()?;
        let span = self.here();
        let Some((start, c)) = self.bump() else {
            return Ok(Token {
                tok: Tok::Eof,
                span,
                lexeme: String::new(),
            });
        };
        let simple = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(tok) = simple {
            return Ok(Token {
                tok,
                span,
                lexeme: c.to_string(),
            });
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = start + c.len_utf8();
            while let Some(&(i, c)) = self.chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    end = i + c.len_utf8();
                    self.bump();
                } else {
                    break;
                }
            }
            let text = &self.src[start..end];
            let tok = match Keyword::from_ident(text) {
                Some(kw) => Tok::Kw(kw),
                None => Tok::Ident(text.to_owned()),
            };
            return Ok(Token {
                tok,
                span,
                lexeme: text.to_owned(),
            });
        }
        Err(ParseError {
            position: span,
            expected: "a token".into(),
            found: format!("`{}`", c.escape_debug()),
        })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<Token>,
    spans: BTreeMap<DeclRef, Span>,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Result<&Token, ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next_token()?);
        }
        Ok(self.peeked.as_ref().expect("peeked token"))
    }

    fn next(&mut self) -> Result<Token, ParseError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lexer.next_token(),
        }
    }

    fn error(tok: &Token, expected: &str) -> ParseError {
        ParseError {
            position: tok.span,
            expected: expected.to_owned(),
            found: tok.found(),
        }
    }

    fn expect(&mut self, want: Tok, expected: &str) -> Result<Token, ParseError> {
        let t = self.next()?;
        if t.tok == want {
            Ok(t)
        } else {
            Err(Self::error(&t, expected))
        }
    }

    fn ident(&mut self) -> Result<(String, Span), ParseError> {
        let t = self.next()?;
        match t.tok {
            Tok::Ident(name) => Ok((name, t.span)),
            _ => Err(Self::error(&t, "identifier")),
        }
    }

    fn ident_list(&mut self) -> Result<Vec<String>, ParseError> {
        let mut out = vec![self.ident()?.0];
        while self.peek()?.tok == Tok::Comma {
            self.next()?;
            out.push(self.ident()?.0);
        }
        Ok(out)
    }

    fn record(&mut self, decl: DeclRef, span: Span) {
        self.spans.entry(decl).or_insert(span);
    }

    fn document(&mut self) -> Result<ClassModel, ParseError> {
        let mut classes = Vec::new();
        loop {
            let t = self.next()?;
            match t.tok {
                Tok::Eof => return Ok(ClassModel::new(classes)),
                Tok::Kw(Keyword::Class) => classes.push(self.class_decl()?),
                _ => return Err(Self::error(&t, "`class` or end of input")),
            }
        }
    }

    fn class_decl(&mut self) -> Result<ClassDecl, ParseError> {
        let (name, span) = self.ident()?;
        self.record(DeclRef::Class(name.clone()), span);
        let mut class = ClassDecl::new(name);
        if self.peek()?.tok == Tok::Kw(Keyword::Extends) {
            self.next()?;
            class.parents = self.ident_list()?;
        }
        self.expect(Tok::LBrace, "`{`")?;
        loop {
            let t = self.next()?;
            match t.tok {
                Tok::RBrace => return Ok(class),
                Tok::Kw(Keyword::Visible) => self.feature(&mut class, Visibility::Visible)?,
                Tok::Kw(Keyword::Hidden) => self.feature(&mut class, Visibility::Hidden)?,
                Tok::Kw(Keyword::Method) => self.method(&mut class, Visibility::Visible)?,
                Tok::Kw(Keyword::Attribute) => self.attribute(&mut class, Visibility::Visible)?,
                Tok::Kw(Keyword::Uses) => {
                    let targets = self.ident_list()?;
                    self.expect(Tok::Semi, "`;`")?;
                    class.uses.extend(targets);
                }
                _ => {
                    return Err(Self::error(
                        &t,
                        "`method`, `attribute`, `uses`, a visibility or `}`",
                    ))
                }
            }
        }
    }

    /// After a visibility keyword: `method ...` or `attribute ...`.
    fn feature(&mut self, class: &mut ClassDecl, visibility: Visibility) -> Result<(), ParseError> {
        let t = self.next()?;
        match t.tok {
            Tok::Kw(Keyword::Method) => self.method(class, visibility),
            Tok::Kw(Keyword::Attribute) => self.attribute(class, visibility),
            _ => Err(Self::error(&t, "`method` or `attribute`")),
        }
    }

    fn method(&mut self, class: &mut ClassDecl, visibility: Visibility) -> Result<(), ParseError> {
        let (name, span) = self.ident()?;
        let mut kind = MethodKind::New;
        if self.peek()?.tok == Tok::Kw(Keyword::Overrides) {
            self.next()?;
            let (target_class, _) = self.ident()?;
            self.expect(Tok::Dot, "`.`")?;
            let (target_method, _) = self.ident()?;
            kind = MethodKind::Override(OverrideTarget {
                class: target_class,
                method: target_method,
            });
        }
        self.expect(Tok::Semi, "`;`")?;
        self.record(
            DeclRef::Method {
                class: class.name.clone(),
                method: name.clone(),
            },
            span,
        );
        class.methods.push(MethodDecl {
            name,
            visibility,
            kind,
        });
        Ok(())
    }

    fn attribute(
        &mut self,
        class: &mut ClassDecl,
        visibility: Visibility,
    ) -> Result<(), ParseError> {
        let (name, span) = self.ident()?;
        self.expect(Tok::Semi, "`;`")?;
        self.record(
            DeclRef::Attribute {
                class: class.name.clone(),
                attribute: name.clone(),
            },
            span,
        );
        class.attributes.push(AttributeDecl { name, visibility });
        Ok(())
    }
}

/// Parses OMDL source. The first offending token aborts the parse.
pub fn parse(source: &str) -> Result<OmdlDocument, ParseError> {
    let mut parser = Parser {
        lexer: Lexer::new(source),
        peeked: None,
        spans: BTreeMap::new(),
    };
    let model = parser.document()?;
    Ok(OmdlDocument {
        model,
        spans: parser.spans,
    })
}

/// Renders a model as OMDL text that parses back to the same model.
pub fn render(model: &ClassModel) -> String {
    let mut out = String::new();
    for (i, class) in model.classes().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str("class ");
        out.push_str(&class.name);
        if !class.parents.is_empty() {
            out.push_str(" extends ");
            out.push_str(&class.parents.join(", "));
        }
        let empty =
            class.methods.is_empty() && class.attributes.is_empty() && class.uses.is_empty();
        if empty {
            out.push_str(" { }\n");
            continue;
        }
        out.push_str(" {\n");
        for m in &class.methods {
            out.push_str("    ");
            if m.visibility == Visibility::Hidden {
                out.push_str("hidden ");
            }
            let _ = write!(out, "method {}", m.name);
            if let Some(t) = m.override_target() {
                let _ = write!(out, " overrides {}.{}", t.class, t.method);
            }
            out.push_str(";\n");
        }
        for a in &class.attributes {
            out.push_str("    ");
            if a.visibility == Visibility::Hidden {
                out.push_str("hidden ");
            }
            let _ = writeln!(out, "attribute {};", a.name);
        }
        if !class.uses.is_empty() {
            let _ = writeln!(out, "    uses {};", class.uses.join(", "));
        }
        out.push_str("}\n");
    }
    out
}
