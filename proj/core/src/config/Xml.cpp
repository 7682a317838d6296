#include "duet/config/Xml.hpp"

#include <expat.h>
#include <fmt/format.h>
#include <memory>

#include "duet/Error.hpp"

namespace duet::config {

const std::string *XmlElement::attribute(std::string_view key) const
{
  for (const auto &[k, v] : attributes) {
    if (k == key) {
      return &v;
    }
  }
  return nullptr;
}

namespace {

struct Builder {
  XML_Parser                parser = nullptr;
  XmlElement                root;
  std::vector<XmlElement *> stack;
  bool                      haveRoot = false;
};

void XMLCALL onStart(void *data, const XML_Char *name, const XML_Char **attributes)
{
  auto      *b = static_cast<Builder *>(data);
  XmlElement element;
  element.name = name;
  element.line = static_cast<int>(XML_GetCurrentLineNumber(b->parser));
  for (int i = 0; attributes[i] != nullptr; i += 2) {
    element.attributes.emplace_back(attributes[i], attributes[i + 1]);
  }
  if (b->stack.empty()) {
    b->root     = std::move(element);
    b->haveRoot = true;
    b->stack.push_back(&b->root);
  } else {
    auto &children = b->stack.back()->children;
    children.push_back(std::move(element));
    b->stack.push_back(&children.back());
  }
}

void XMLCALL onEnd(void *data, const XML_Char *)
{
  static_cast<Builder *>(data)->stack.pop_back();
}

} // namespace

XmlElement parseXml(std::string_view text)
{
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ConfigError("line 1: missing solver-interface: the document is empty");
  }
  std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreate("UTF-8"), &XML_ParserFree);
  if (!parser) {
    throw ConfigError("cannot create XML parser");
  }
  Builder builder;
  builder.parser = parser.get();
  XML_SetUserData(parser.get(), &builder);
  XML_SetElementHandler(parser.get(), onStart, onEnd);
  if (XML_Parse(parser.get(), text.data(), static_cast<int>(text.size()), XML_TRUE) == XML_STATUS_ERROR) {
    throw ConfigError(fmt::format("line {}: XML syntax error: {}", XML_GetCurrentLineNumber(parser.get()),
                                  XML_ErrorString(XML_GetErrorCode(parser.get()))));
  }
  return std::move(builder.root);
}

std::string escapeXml(std::string_view text)
{
  std::string out;
  for (char c : text) {
    switch (c) {
    case '&':
      out += "&amp;";
      break;
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '"':
      out += "&quot;";
      break;
    default:
      out += c;
    }
  }
  return out;
}

} // namespace duet::config
